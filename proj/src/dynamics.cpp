#include "smcf/dynamics.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace smcf {

namespace {

inline int sq(int d, int i, int j) { return i * d + j; }

// exp(tau * sigma * Delta) as a Fourier multiplier, sigma = dir*i + lambda.
Field apply_semigroup(const Field& phi, double tau, double lambda, int direction) {
    if (tau == 0.0) return phi;
    SpectralField s = analyze(phi);
    const GridSpec& spec = phi.spec;
    const int n = spec.n;
    std::size_t p = 0;
    auto mode_xi2 = [&](int j) {
        const double xi = spec.frequency(j);
        return xi * xi;
    };
    for (int j0 = 0; j0 < n; ++j0) {
        const double x0 = mode_xi2(j0);
        if (spec.d == 1) {
            s.coeffs[p++] *= std::exp(-lambda * tau * x0) * std::polar(1.0, -direction * tau * x0);
            continue;
        }
        for (int j1 = 0; j1 < n; ++j1) {
            const double x01 = x0 + mode_xi2(j1);
            if (spec.d == 2) {
                s.coeffs[p++] *=
                    std::exp(-lambda * tau * x01) * std::polar(1.0, -direction * tau * x01);
                continue;
            }
            for (int j2 = 0; j2 < n; ++j2) {
                const double xi2 = x01 + mode_xi2(j2);
                s.coeffs[p++] *=
                    std::exp(-lambda * tau * xi2) * std::polar(1.0, -direction * tau * xi2);
            }
        }
    }
    return synthesize(s);
}

// sigma * Delta phi in Fourier space, sigma = i + lambda.
SpectralField linear_part_hat(const SpectralField& s, double lambda) {
    SpectralField out = s;
    const GridSpec& spec = s.spec;
    const int n = spec.n;
    const Complex sigma(lambda, 1.0);
    std::size_t p = 0;
    auto xi2_of = [&](int j) {
        const double xi = spec.frequency(j);
        return xi * xi;
    };
    for (int j0 = 0; j0 < n; ++j0) {
        const double x0 = xi2_of(j0);
        if (spec.d == 1) {
            out.coeffs[p] = s.coeffs[p] * sigma * (-x0);
            ++p;
            continue;
        }
        for (int j1 = 0; j1 < n; ++j1) {
            const double x01 = x0 + xi2_of(j1);
            if (spec.d == 2) {
                out.coeffs[p] = s.coeffs[p] * sigma * (-x01);
                ++p;
                continue;
            }
            for (int j2 = 0; j2 < n; ++j2) {
                out.coeffs[p] = s.coeffs[p] * sigma * (-(x01 + xi2_of(j2)));
                ++p;
            }
        }
    }
    return out;
}

double lambda_of(const RhsMode& mode) {
    return mode.kind == RhsKind::regularized ? mode.lambda : 0.0;
}

// Full (un-dealiased) time derivative for the selected formulation.
Field raw_rhs(const Field& phi, const RhsMode& mode) {
    if (mode.kind == RhsKind::linear) {
        // i Delta phi, recast of dt_u1 = -Lap u2, dt_u2 = Lap u1
        return synthesize(linear_part_hat(analyze(phi), 0.0));
    }
    if (mode.kind == RhsKind::compact_coefficient) {
        // i dt_phi = -(1/(Lambda sqrt(1+|du1|^2))) g^{ij} d2_ij phi,
        // the sign calibrated against the exact system.
        GraphDerivatives der = graph_derivatives(phi);
        MetricData metric = assemble_metric(der);
        FrameData frame = normal_frame(der);
        const GridSpec& spec = phi.spec;
        const int d = spec.d;
        const std::size_t N = spec.point_count();
        Field out = Field::zeros(spec);
        for (std::size_t p = 0; p < N; ++p) {
            const double* du = &der.du[p * d * 2];
            double du1sq = 0.0;
            for (int i = 0; i < d; ++i) du1sq += du[i * 2] * du[i * 2];
            const double c = 1.0 / (frame.lambda[p] * std::sqrt(1.0 + du1sq));
            Complex trace(0.0, 0.0);
            const double* gi = &metric.ginv[p * d * d];
            const double* d2u = &der.d2u[p * d * d * 2];
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    trace += gi[sq(d, i, j)] *
                             Complex(d2u[sq(d, i, j) * 2], d2u[sq(d, i, j) * 2 + 1]);
            out.values[p] = Complex(0.0, 1.0) * c * trace;
        }
        return out;
    }
    GraphVelocity gv = graph_velocity(phi, lambda_of(mode));
    return std::move(gv.dtphi);
}

} // namespace

RhsKind rhs_kind_from_string(const std::string& s) {
    if (s == "exact_system") return RhsKind::exact_system;
    if (s == "compact_coefficient") return RhsKind::compact_coefficient;
    if (s == "linear") return RhsKind::linear;
    if (s == "regularized") return RhsKind::regularized;
    throw std::invalid_argument("unknown rhs mode '" + s + "'");
}

std::string to_string(RhsKind k) {
    switch (k) {
    case RhsKind::exact_system: return "exact_system";
    case RhsKind::compact_coefficient: return "compact_coefficient";
    case RhsKind::linear: return "linear";
    case RhsKind::regularized: return "regularized";
    }
    return "?";
}

void RhsMode::validate() const {
    if (lambda < 0.0 || lambda > 1.0)
        throw std::invalid_argument("rhs mode: lambda must be in [0, 1]");
    if (kind != RhsKind::regularized && lambda != 0.0)
        throw std::invalid_argument("rhs mode: lambda must be 0 unless regularized");
}

GraphVelocity graph_velocity(const Field& phi, double lambda) {
    GraphVelocity gv;
    gv.geo.der = graph_derivatives(phi);
    gv.geo.metric = assemble_metric(gv.geo.der);
    gv.geo.frame = normal_frame(gv.geo.der);
    gv.geo.curv = second_fundamental_form(gv.geo.der, gv.geo.frame, gv.geo.metric);

    const GridSpec& spec = phi.spec;
    const int d = spec.d;
    const std::size_t N = spec.point_count();
    gv.dtphi = Field::zeros(spec);

    // The surface velocity is V = JH + lambda H; matching normal components
    // of the graph velocity (0,...,0, dt_u1, dt_u2) against V gives
    //   dt_u1 = sqrt(P) (H2 - lambda H1)
    //   dt_u2 = (du1 . du2)/sqrt(P) (H2 - lambda H1) - Lambda (H1 + lambda H2)
    // with P = 1 + |du1|^2, equivalently dt_u_a = V_{d+a} - du_a . V_horiz.
    for (std::size_t p = 0; p < N; ++p) {
        const double* du = &gv.geo.der.du[p * d * 2];
        double du1sq = 0.0, dot = 0.0;
        for (int i = 0; i < d; ++i) {
            du1sq += du[i * 2] * du[i * 2];
            dot += du[i * 2] * du[i * 2 + 1];
        }
        const double sqrtP = std::sqrt(1.0 + du1sq);
        const double h1 = gv.geo.curv.hcoef[p * 2 + 0];
        const double h2 = gv.geo.curv.hcoef[p * 2 + 1];
        const double q = h2 - lambda * h1;
        const double dtu1 = sqrtP * q;
        const double dtu2 = dot / sqrtP * q - gv.geo.frame.lambda[p] * (h1 + lambda * h2);
        gv.dtphi.values[p] = Complex(dtu1, dtu2);
    }
    return gv;
}

Field nonlinear_residual(const Field& phi, const RhsMode& mode) {
    mode.validate();
    if (!phi.finite()) throw std::invalid_argument("rhs: non-finite field");
    if (mode.kind == RhsKind::linear) return Field::zeros(phi.spec);

    Field total = raw_rhs(phi, mode);
    SpectralField t = analyze(total);
    SpectralField lin = linear_part_hat(analyze(phi), lambda_of(mode));
    for (std::size_t p = 0; p < t.coeffs.size(); ++p) t.coeffs[p] -= lin.coeffs[p];
    return synthesize(dealias(std::move(t)));
}

Field rhs(const Field& phi, const RhsMode& mode) {
    mode.validate();
    if (!phi.finite()) throw std::invalid_argument("rhs: non-finite field");
    if (mode.kind == RhsKind::linear) return raw_rhs(phi, mode);

    Field nonlin = nonlinear_residual(phi, mode);
    Field lin = synthesize(linear_part_hat(analyze(phi), lambda_of(mode)));
    for (std::size_t p = 0; p < lin.values.size(); ++p) lin.values[p] += nonlin.values[p];
    return lin;
}

Field linear_propagator(const Field& phi, const RhsMode& mode, double tau, int direction) {
    mode.validate();
    const double lam = lambda_of(mode);
    if (direction != +1 && lam != 0.0)
        throw std::invalid_argument("linear_propagator: reversed regularized flow unsupported");
    return apply_semigroup(phi, tau, lam, direction);
}

double normal_velocity_check(const Field& phi) {
    GraphVelocity gv = graph_velocity(phi, 0.0);
    const GridSpec& spec = phi.spec;
    const int d = spec.d;
    const std::size_t N = spec.point_count();
    double worst = 0.0;
    for (std::size_t p = 0; p < N; ++p) {
        const double dtu1 = gv.dtphi.values[p].real();
        const double dtu2 = gv.dtphi.values[p].imag();
        for (int a = 0; a < 2; ++a) {
            const double* nu =
                (a == 0) ? &gv.geo.frame.nu1[p * (d + 2)] : &gv.geo.frame.nu2[p * (d + 2)];
            const double* JH = &gv.geo.curv.JH[p * (d + 2)];
            double vdotnu = dtu1 * nu[d] + dtu2 * nu[d + 1];
            double jhdotnu = 0.0;
            for (int c = 0; c < d + 2; ++c) jhdotnu += JH[c] * nu[c];
            worst = std::max(worst, std::abs(vdotnu - jhdotnu));
        }
    }
    return worst;
}

InitKind init_kind_from_string(const std::string& s) {
    if (s == "gaussian_packet") return InitKind::gaussian_packet;
    if (s == "sine_bump") return InitKind::sine_bump;
    if (s == "random_smooth") return InitKind::random_smooth;
    throw std::invalid_argument("unknown initial data kind '" + s + "'");
}

Field initial_data(const GridSpec& spec, InitKind kind, double amplitude, double width,
                   double modulation, std::uint64_t seed) {
    if (amplitude < 0.0) throw std::invalid_argument("initial_data: amplitude must be >= 0");
    if (!(width > 0.0)) throw std::invalid_argument("initial_data: width must be positive");
    if (amplitude == 0.0) return Field::zeros(spec);

    switch (kind) {
    case InitKind::gaussian_packet:
        return sample_field(spec, [&](const std::array<double, 3>& x) {
            double r2 = 0.0;
            for (int i = 0; i < spec.d; ++i) r2 += x[i] * x[i];
            return amplitude * std::exp(-r2 / (2.0 * width * width)) *
                   std::polar(1.0, modulation * x[0]);
        });
    case InitKind::sine_bump: {
        const double kappa = modulation > 0.0 ? modulation : 1.0;
        return sample_field(spec, [&](const std::array<double, 3>& x) {
            double r2 = 0.0, s = 1.0;
            for (int i = 0; i < spec.d; ++i) {
                r2 += x[i] * x[i];
                s *= std::sin(kappa * x[i]);
            }
            return Complex(amplitude * s * std::exp(-r2 / (2.0 * width * width)), 0.0);
        });
    }
    case InitKind::random_smooth: {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        SpectralField s;
        s.spec = spec;
        s.coeffs.assign(spec.point_count(), Complex(0.0, 0.0));
        const int n = spec.n;
        std::size_t p = 0;
        for (int j0 = 0; j0 < n; ++j0) {
            for (int j1 = 0; j1 < (spec.d > 1 ? n : 1); ++j1) {
                for (int j2 = 0; j2 < (spec.d > 2 ? n : 1); ++j2, ++p) {
                    const int ks[3] = {spec.wavenumber(j0),
                                       spec.d > 1 ? spec.wavenumber(j1) : 0,
                                       spec.d > 2 ? spec.wavenumber(j2) : 0};
                    bool in_band = true;
                    for (int ax = 0; ax < spec.d; ++ax)
                        if (std::abs(ks[ax]) > 4) in_band = false;
                    if (!in_band) continue;
                    s.coeffs[p] = Complex(gauss(rng), gauss(rng));
                }
            }
        }
        Field f = synthesize(s);
        const double h4 = sobolev_norm(f, 4.0);
        if (h4 > 0.0) {
            const double scale = amplitude / h4;
            for (Complex& v : f.values) v *= scale;
        }
        return f;
    }
    }
    throw std::invalid_argument("initial_data: unknown kind");
}

} // namespace smcf
