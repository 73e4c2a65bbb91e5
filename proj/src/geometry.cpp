#include "smcf/geometry.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace smcf {

namespace {

inline int sq(int d, int i, int j) { return i * d + j; }

void check_finite(const Field& f, const char* who) {
    if (!f.finite()) throw std::invalid_argument(std::string(who) + ": non-finite field");
}

// Spectral derivative of a real-valued sample set, returned as real samples.
std::vector<double> real_derivative(const GridSpec& spec, const std::vector<double>& samples,
                                    const std::array<int, 3>& alpha) {
    Field f;
    f.spec = spec;
    f.values.resize(samples.size());
    for (std::size_t p = 0; p < samples.size(); ++p) f.values[p] = Complex(samples[p], 0.0);
    Field df = derivative(f, alpha);
    std::vector<double> out(samples.size());
    for (std::size_t p = 0; p < samples.size(); ++p) out[p] = df.values[p].real();
    return out;
}

} // namespace

GraphDerivatives graph_derivatives(const Field& f) {
    check_finite(f, "graph_derivatives");
    const GridSpec& spec = f.spec;
    const int d = spec.d;
    const std::size_t N = spec.point_count();
    GraphDerivatives out;
    out.spec = spec;
    out.du.assign(N * d * 2, 0.0);
    out.d2u.assign(N * d * d * 2, 0.0);

    std::array<int, 3> alpha{0, 0, 0};
    for (int i = 0; i < d; ++i) {
        alpha = {0, 0, 0};
        alpha[i] = 1;
        Field di = derivative(f, alpha);
        for (std::size_t p = 0; p < N; ++p) {
            out.du[(p * d + i) * 2 + 0] = di.values[p].real();
            out.du[(p * d + i) * 2 + 1] = di.values[p].imag();
        }
        for (int j = i; j < d; ++j) {
            alpha = {0, 0, 0};
            alpha[i] += 1;
            alpha[j] += 1;
            Field dij = derivative(f, alpha);
            for (std::size_t p = 0; p < N; ++p) {
                const double re = dij.values[p].real();
                const double im = dij.values[p].imag();
                out.d2u[((p * d + i) * d + j) * 2 + 0] = re;
                out.d2u[((p * d + i) * d + j) * 2 + 1] = im;
                out.d2u[((p * d + j) * d + i) * 2 + 0] = re;
                out.d2u[((p * d + j) * d + i) * 2 + 1] = im;
            }
        }
    }
    return out;
}

MetricData assemble_metric(const Field& f) { return assemble_metric(graph_derivatives(f)); }

MetricData assemble_metric(const GraphDerivatives& der) {
    const GridSpec& spec = der.spec;
    const int d = spec.d;
    const std::size_t N = spec.point_count();
    MetricData m;
    m.spec = spec;
    m.du = der.du;
    m.g.assign(N * d * d, 0.0);
    m.ginv.assign(N * d * d, 0.0);
    m.sqrt_det.assign(N, 0.0);

    for (std::size_t p = 0; p < N; ++p) {
        const double* du = &der.du[p * d * 2];
        double gradsq = 0.0;
        for (int i = 0; i < d; ++i)
            gradsq += du[i * 2] * du[i * 2] + du[i * 2 + 1] * du[i * 2 + 1];
        if (gradsq > 1.0) m.large_gradient = true;

        double* g = &m.g[p * d * d];
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                g[sq(d, i, j)] = (i == j ? 1.0 : 0.0) +
                                 du[i * 2] * du[j * 2] + du[i * 2 + 1] * du[j * 2 + 1];

        // Woodbury on g = I + B B^T with B the d x 2 gradient matrix:
        // g^{-1} = I - B (I2 + B^T B)^{-1} B^T, det g = det(I2 + B^T B).
        double s11 = 1.0, s12 = 0.0, s22 = 1.0;
        for (int i = 0; i < d; ++i) {
            s11 += du[i * 2] * du[i * 2];
            s12 += du[i * 2] * du[i * 2 + 1];
            s22 += du[i * 2 + 1] * du[i * 2 + 1];
        }
        const double det = s11 * s22 - s12 * s12;
        if (!(det > 0.0)) throw std::runtime_error("assemble_metric: singular metric");
        m.sqrt_det[p] = std::sqrt(det);
        const double i11 = s22 / det, i12 = -s12 / det, i22 = s11 / det;
        double* gi = &m.ginv[p * d * d];
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                const double bi1 = du[i * 2], bi2 = du[i * 2 + 1];
                const double bj1 = du[j * 2], bj2 = du[j * 2 + 1];
                const double corr = bi1 * (i11 * bj1 + i12 * bj2) + bi2 * (i12 * bj1 + i22 * bj2);
                gi[sq(d, i, j)] = (i == j ? 1.0 : 0.0) - corr;
            }
        }
    }
    return m;
}

std::vector<double> christoffel(const MetricData& metric, const Field& f) {
    const GridSpec& spec = metric.spec;
    const int d = spec.d;
    const std::size_t N = spec.point_count();
    (void)f;

    // dg[((m*d + i)*d + j)] at point p: d_m g_ij, spectral derivative of the samples
    std::vector<std::vector<double>> dg(d * d * d);
    std::vector<double> comp(N);
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            for (std::size_t p = 0; p < N; ++p) comp[p] = metric.g[p * d * d + sq(d, i, j)];
            for (int m = 0; m < d; ++m) {
                std::array<int, 3> alpha{0, 0, 0};
                alpha[m] = 1;
                auto dm = real_derivative(spec, comp, alpha);
                dg[(m * d + i) * d + j] = dm;
                if (i != j) dg[(m * d + j) * d + i] = std::move(dm);
            }
        }
    }

    std::vector<double> gamma(N * d * d * d, 0.0);
    for (std::size_t p = 0; p < N; ++p) {
        const double* gi = &metric.ginv[p * d * d];
        for (int l = 0; l < d; ++l)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double acc = 0.0;
                    for (int m = 0; m < d; ++m) {
                        const double t = dg[(i * d + j) * d + m][p] + dg[(j * d + i) * d + m][p] -
                                         dg[(m * d + i) * d + j][p];
                        acc += gi[sq(d, l, m)] * t;
                    }
                    gamma[((p * d + l) * d + i) * d + j] = 0.5 * acc;
                }
    }
    return gamma;
}

FrameData normal_frame(const Field& f) { return normal_frame(graph_derivatives(f)); }

FrameData normal_frame(const GraphDerivatives& der) {
    const GridSpec& spec = der.spec;
    const int d = spec.d;
    const std::size_t N = spec.point_count();
    FrameData fr;
    fr.spec = spec;
    fr.nu1.assign(N * (d + 2), 0.0);
    fr.nu2.assign(N * (d + 2), 0.0);
    fr.lambda.assign(N, 0.0);

    for (std::size_t p = 0; p < N; ++p) {
        const double* du = &der.du[p * d * 2];
        double du1sq = 0.0, du2sq = 0.0, dot = 0.0;
        for (int i = 0; i < d; ++i) {
            du1sq += du[i * 2] * du[i * 2];
            du2sq += du[i * 2 + 1] * du[i * 2 + 1];
            dot += du[i * 2] * du[i * 2 + 1];
        }
        const double P = 1.0 + du1sq;
        const double sqrtP = std::sqrt(P);
        const double b = dot / P;
        double wsq = 0.0;
        double* nu1 = &fr.nu1[p * (d + 2)];
        double* nu2 = &fr.nu2[p * (d + 2)];
        for (int i = 0; i < d; ++i) {
            nu1[i] = du[i * 2] / sqrtP;
            const double w = du[i * 2 + 1] - b * du[i * 2];
            nu2[i] = w;
            wsq += w * w;
        }
        nu1[d] = -1.0 / sqrtP;
        nu1[d + 1] = 0.0;
        const double lambda = std::sqrt(wsq + b * b + 1.0);
        fr.lambda[p] = lambda;
        for (int i = 0; i < d; ++i) nu2[i] /= lambda;
        nu2[d] = b / lambda;
        nu2[d + 1] = -1.0 / lambda;
    }
    return fr;
}

CurvatureData second_fundamental_form(const Field& f, const FrameData& frame,
                                      const MetricData& metric) {
    return second_fundamental_form(graph_derivatives(f), frame, metric);
}

CurvatureData second_fundamental_form(const GraphDerivatives& der, const FrameData& frame,
                                      const MetricData& metric) {
    const GridSpec& spec = der.spec;
    const int d = spec.d;
    const std::size_t N = spec.point_count();
    CurvatureData c;
    c.spec = spec;
    c.h.assign(N * 2 * d * d, 0.0);
    c.hcoef.assign(N * 2, 0.0);
    c.H.assign(N * (d + 2), 0.0);
    c.JH.assign(N * (d + 2), 0.0);
    c.a_normsq.assign(N, 0.0);

    std::vector<double> ht(d * d); // ginv . h, scratch
    for (std::size_t p = 0; p < N; ++p) {
        const double* d2u = &der.d2u[p * d * d * 2];
        const double* gi = &metric.ginv[p * d * d];
        const double* nu1 = &frame.nu1[p * (d + 2)];
        const double* nu2 = &frame.nu2[p * (d + 2)];
        double* h = &c.h[p * 2 * d * d];

        for (int a = 0; a < 2; ++a) {
            const double* nu = (a == 0) ? nu1 : nu2;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    h[(a * d + i) * d + j] =
                        d2u[sq(d, i, j) * 2 + 0] * nu[d] + d2u[sq(d, i, j) * 2 + 1] * nu[d + 1];
            double tr = 0.0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) tr += gi[sq(d, i, j)] * h[(a * d + i) * d + j];
            c.hcoef[p * 2 + a] = tr;

            // |A|^2_g via tr((g^{-1} h)^2)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double acc = 0.0;
                    for (int m = 0; m < d; ++m) acc += gi[sq(d, i, m)] * h[(a * d + m) * d + j];
                    ht[sq(d, i, j)] = acc;
                }
            double nsq = 0.0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) nsq += ht[sq(d, i, j)] * ht[sq(d, j, i)];
            c.a_normsq[p] += nsq;
        }

        const double h1 = c.hcoef[p * 2 + 0];
        const double h2 = c.hcoef[p * 2 + 1];
        double* H = &c.H[p * (d + 2)];
        double* JH = &c.JH[p * (d + 2)];
        for (int k = 0; k < d + 2; ++k) {
            H[k] = h1 * nu1[k] + h2 * nu2[k];
            JH[k] = h1 * nu2[k] - h2 * nu1[k];
        }
    }
    return c;
}

NablaA covariant_derivative_A(const GraphDerivatives& der, const MetricData& metric,
                              const std::vector<double>& christoffel, const FrameData& frame,
                              const CurvatureData& curv) {
    const GridSpec& spec = der.spec;
    const int d = spec.d;
    const std::size_t N = spec.point_count();

    // spectral derivatives of the h and frame samples
    std::vector<std::vector<double>> dh(d * 2 * d * d);   // [((k*2 + a)*d + i)*d + j]
    std::vector<std::vector<double>> dnu(d * 2 * (d + 2)); // [(k*2 + b)*(d+2) + c]
    std::vector<double> comp(N);
    for (int a = 0; a < 2; ++a)
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                for (std::size_t p = 0; p < N; ++p)
                    comp[p] = curv.h[(p * 2 + a) * d * d + sq(d, i, j)];
                for (int k = 0; k < d; ++k) {
                    std::array<int, 3> alpha{0, 0, 0};
                    alpha[k] = 1;
                    auto dk = real_derivative(spec, comp, alpha);
                    dh[((k * 2 + a) * d + i) * d + j] = dk;
                    if (i != j) dh[((k * 2 + a) * d + j) * d + i] = std::move(dk);
                }
            }
    for (int b = 0; b < 2; ++b)
        for (int cidx = 0; cidx < d + 2; ++cidx) {
            const std::vector<double>& nu = (b == 0) ? frame.nu1 : frame.nu2;
            for (std::size_t p = 0; p < N; ++p) comp[p] = nu[p * (d + 2) + cidx];
            for (int k = 0; k < d; ++k) {
                std::array<int, 3> alpha{0, 0, 0};
                alpha[k] = 1;
                dnu[(k * 2 + b) * (d + 2) + cidx] = real_derivative(spec, comp, alpha);
            }
        }

    NablaA out;
    out.spec = spec;
    out.nabla_a.assign(N * d * 2 * d * d, 0.0);
    out.normsq.assign(N, 0.0);

    std::vector<double> raised(d * d * d);
    for (std::size_t p = 0; p < N; ++p) {
        const double* gi = &metric.ginv[p * d * d];
        const double* nu1 = &frame.nu1[p * (d + 2)];
        const double* nu2 = &frame.nu2[p * (d + 2)];
        const double* h = &curv.h[p * 2 * d * d];

        // normal connection coefficients (d_k nu_b) . nu_a
        double omega[3][2][2]; // [k][b][a]
        for (int k = 0; k < d; ++k)
            for (int b = 0; b < 2; ++b)
                for (int a = 0; a < 2; ++a) {
                    const double* nua = (a == 0) ? nu1 : nu2;
                    double acc = 0.0;
                    for (int cidx = 0; cidx < d + 2; ++cidx)
                        acc += dnu[(k * 2 + b) * (d + 2) + cidx][p] * nua[cidx];
                    omega[k][b][a] = acc;
                }

        double* na = &out.nabla_a[p * d * 2 * d * d];
        for (int k = 0; k < d; ++k)
            for (int a = 0; a < 2; ++a)
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) {
                        double acc = dh[((k * 2 + a) * d + i) * d + j][p];
                        for (int m = 0; m < d; ++m) {
                            const double gki =
                                christoffel[((p * d + m) * d + k) * d + i];
                            const double gkj =
                                christoffel[((p * d + m) * d + k) * d + j];
                            acc -= gki * h[(a * d + m) * d + j];
                            acc -= gkj * h[(a * d + i) * d + m];
                        }
                        for (int b = 0; b < 2; ++b)
                            acc += omega[k][b][a] * h[(b * d + i) * d + j];
                        na[((k * 2 + a) * d + i) * d + j] = acc;
                    }

        // |nabla A|^2_g: raise all three tangential indices
        double nsq = 0.0;
        for (int a = 0; a < 2; ++a) {
            for (int k = 0; k < d; ++k)
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) {
                        double acc = 0.0;
                        for (int kk = 0; kk < d; ++kk)
                            for (int ii = 0; ii < d; ++ii)
                                for (int jj = 0; jj < d; ++jj)
                                    acc += gi[sq(d, k, kk)] * gi[sq(d, i, ii)] *
                                           gi[sq(d, j, jj)] *
                                           na[((kk * 2 + a) * d + ii) * d + jj];
                        raised[(k * d + i) * d + j] = acc;
                    }
            for (int k = 0; k < d; ++k)
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j)
                        nsq += raised[(k * d + i) * d + j] * na[((k * 2 + a) * d + i) * d + j];
        }
        out.normsq[p] = nsq;
    }
    return out;
}

GeometryBundle geometry_bundle(const Field& f, bool with_christoffel) {
    GeometryBundle b;
    b.der = graph_derivatives(f);
    b.metric = assemble_metric(b.der);
    b.frame = normal_frame(b.der);
    b.curv = second_fundamental_form(b.der, b.frame, b.metric);
    if (with_christoffel) b.christoffel = christoffel(b.metric, f);
    return b;
}

double tensor_norm_A(const Field& f, int l, double p) {
    if (l < 0 || l > 1) throw std::invalid_argument("tensor_norm_A: l must be 0 or 1");
    if (p < 2.0) throw std::invalid_argument("tensor_norm_A: p must be >= 2");
    GeometryBundle b = geometry_bundle(f, l >= 1);
    const GridSpec& spec = f.spec;
    const std::size_t N = spec.point_count();
    double hd = 1.0;
    for (int i = 0; i < spec.d; ++i) hd *= spec.spacing;

    std::vector<const std::vector<double>*> levels;
    levels.push_back(&b.curv.a_normsq);
    NablaA na;
    if (l >= 1) {
        na = covariant_derivative_A(b.der, b.metric, b.christoffel, b.frame, b.curv);
        levels.push_back(&na.normsq);
    }

    if (std::isinf(p)) {
        double total = 0.0;
        for (const auto* lvl : levels) {
            double m = 0.0;
            for (std::size_t q = 0; q < N; ++q) m = std::max(m, std::sqrt(std::max(0.0, (*lvl)[q])));
            total += m;
        }
        return total;
    }
    double acc = 0.0;
    for (const auto* lvl : levels)
        for (std::size_t q = 0; q < N; ++q)
            acc += std::pow(std::max(0.0, (*lvl)[q]), 0.5 * p) * b.metric.sqrt_det[q] * hd;
    return std::pow(acc, 1.0 / p);
}

namespace {

// Pointwise |D^k D^2 u|^2 summed over both components, counting every ordered
// derivative tuple (multinomial multiplicities over sorted multi-indices).
std::vector<double> hessian_level_normsq(const Field& f, int k) {
    const GridSpec& spec = f.spec;
    const int d = spec.d;
    const std::size_t N = spec.point_count();
    std::vector<double> out(N, 0.0);

    const int order = k + 2;
    std::array<int, 3> a{0, 0, 0};
    auto factorial = [](int m) {
        double r = 1.0;
        for (int i = 2; i <= m; ++i) r *= i;
        return r;
    };
    for (a[0] = 0; a[0] <= order; ++a[0])
        for (a[1] = 0; a[1] <= (d > 1 ? order - a[0] : 0); ++a[1])
            for (a[2] = 0; a[2] <= (d > 2 ? order - a[0] - a[1] : 0); ++a[2]) {
                if (a[0] + a[1] + a[2] != order) continue;
                const double mult =
                    factorial(order) / (factorial(a[0]) * factorial(a[1]) * factorial(a[2]));
                Field df = derivative(f, a);
                for (std::size_t p = 0; p < N; ++p) out[p] += mult * std::norm(df.values[p]);
            }
    return out;
}

} // namespace

double d2u_norm(const Field& f, int l, double p) {
    if (l < 0 || l > 2) throw std::invalid_argument("d2u_norm: l must be in [0, 2]");
    if (p < 2.0) throw std::invalid_argument("d2u_norm: p must be >= 2");
    check_finite(f, "d2u_norm");
    const GridSpec& spec = f.spec;
    const std::size_t N = spec.point_count();
    double hd = 1.0;
    for (int i = 0; i < spec.d; ++i) hd *= spec.spacing;

    if (std::isinf(p)) {
        double total = 0.0;
        for (int k = 0; k <= l; ++k) {
            auto lvl = hessian_level_normsq(f, k);
            double m = 0.0;
            for (std::size_t q = 0; q < N; ++q) m = std::max(m, std::sqrt(lvl[q]));
            total += m;
        }
        return total;
    }
    double acc = 0.0;
    for (int k = 0; k <= l; ++k) {
        auto lvl = hessian_level_normsq(f, k);
        for (std::size_t q = 0; q < N; ++q) acc += std::pow(lvl[q], 0.5 * p) * hd;
    }
    return std::pow(acc, 1.0 / p);
}

double induced_volume(const Field& f) {
    MetricData m = assemble_metric(f);
    double hd = 1.0;
    for (int i = 0; i < f.spec.d; ++i) hd *= f.spec.spacing;
    double acc = 0.0;
    for (double s : m.sqrt_det) acc += s;
    return acc * hd;
}

} // namespace smcf
