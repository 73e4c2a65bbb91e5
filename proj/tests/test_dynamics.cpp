#include "smcf/dynamics.hpp"
#include "smcf/oracle.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace smcf;
using namespace smcf::test;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

Field scaled(const Field& f, double a) {
    Field out = f;
    for (Complex& v : out.values) v *= a;
    return out;
}

Field laplacian_i(const Field& f) {
    Field acc = Field::zeros(f.spec);
    for (int i = 0; i < f.spec.d; ++i) {
        std::array<int, 3> a{0, 0, 0};
        a[i] = 2;
        Field dii = derivative(f, a);
        for (std::size_t p = 0; p < acc.values.size(); ++p) acc.values[p] += dii.values[p];
    }
    for (Complex& v : acc.values) v *= Complex(0.0, 1.0);
    return acc;
}

double l2(const Field& f) { return lp_norm(f, 2.0); }

} // namespace

TEST_CASE("RhsMode validation") {
    RhsMode ok{RhsKind::regularized, 0.3};
    ok.validate();
    CHECK_THROWS_AS((RhsMode{RhsKind::exact_system, 0.3}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((RhsMode{RhsKind::regularized, 1.5}.validate()), std::invalid_argument);
    CHECK_THROWS_AS(rhs_kind_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("flat plane is stationary in every mode") {
    GridSpec spec = make_grid(2, 32, 8.0);
    Field zero = Field::zeros(spec);
    for (RhsKind kind : {RhsKind::exact_system, RhsKind::compact_coefficient, RhsKind::linear}) {
        Field r = rhs(zero, RhsMode{kind, 0.0});
        CHECK(lp_norm(r, inf) == 0.0);
    }
    Field r = rhs(zero, RhsMode{RhsKind::regularized, 0.2});
    CHECK(lp_norm(r, inf) == 0.0);
}

TEST_CASE("linear mode is the Fourier eigenrelation") {
    GridSpec spec = make_grid(2, 32, 10.0);
    const double xi0 = 2.0 * M_PI / spec.length * 3.0;
    Field wave = sample_field(spec, [&](const std::array<double, 3>& x) {
        return std::polar(1.0, xi0 * x[0]);
    });
    Field r = rhs(wave, RhsMode{RhsKind::linear, 0.0});
    double err = 0.0;
    for (std::size_t p = 0; p < r.values.size(); ++p)
        err = std::max(err,
                       std::abs(r.values[p] - Complex(0.0, -xi0 * xi0) * wave.values[p]));
    CHECK(err < 1e-12);
}

TEST_CASE("exact system deviates from the free flow at cubic order") {
    GridSpec spec = make_grid(2, 64, 20.0);
    const RhsMode exact{RhsKind::exact_system, 0.0};

    int profile_idx = 0;
    for (InitKind kind :
         {InitKind::gaussian_packet, InitKind::sine_bump, InitKind::random_smooth}) {
        Field v = initial_data(spec, kind, 1.0, 2.0, kind == InitKind::sine_bump ? 0.9 : 0.5,
                               17 + profile_idx);
        v = rescale_gradient(v, 1.0);
        std::vector<double> eps = {1e-3, 2e-3, 4e-3, 8e-3};
        std::vector<double> resid;
        for (double e : eps) {
            Field f = scaled(v, e);
            Field r = rhs(f, exact);
            Field lin = laplacian_i(f);
            for (std::size_t p = 0; p < r.values.size(); ++p) r.values[p] -= lin.values[p];
            resid.push_back(l2(r));
        }
        const double slope = loglog_slope(eps, resid);
        CHECK(slope == doctest::Approx(3.0).epsilon(0.1)); // +-0.3 contract
        ++profile_idx;
    }
}

TEST_CASE("compact coefficient form: sign calibration and cubic-order agreement") {
    GridSpec spec = make_grid(2, 64, 20.0);
    Field base = rescale_gradient(random_band_limited(spec, 5), 1.0);

    Field f = scaled(base, 1e-2);
    Field r_exact = rhs(f, RhsMode{RhsKind::exact_system, 0.0});
    Field r_minus = rhs(f, RhsMode{RhsKind::compact_coefficient, 0.0});
    Field r_plus = r_minus; // the +c g^{ij} d2 phi form flips the whole field
    for (std::size_t p = 0; p < r_plus.values.size(); ++p) r_plus.values[p] = -r_plus.values[p];

    double err_minus = 0.0, err_plus = 0.0;
    for (std::size_t p = 0; p < f.values.size(); ++p) {
        err_minus = std::max(err_minus, std::abs(r_exact.values[p] - r_minus.values[p]));
        err_plus = std::max(err_plus, std::abs(r_exact.values[p] - r_plus.values[p]));
    }
    CHECK(err_minus < 1e-3 * err_plus);

    std::vector<double> eps = {2e-2, 1e-2, 5e-3};
    std::vector<double> diffs;
    for (double e : eps) {
        Field fe = scaled(base, e);
        Field a = rhs(fe, RhsMode{RhsKind::exact_system, 0.0});
        Field b = rhs(fe, RhsMode{RhsKind::compact_coefficient, 0.0});
        for (std::size_t p = 0; p < a.values.size(); ++p) a.values[p] -= b.values[p];
        diffs.push_back(l2(a));
    }
    CHECK(loglog_slope(eps, diffs) == doctest::Approx(3.0).epsilon(0.1));

    Field small = rescale_gradient(base, 0.1);
    Field ra = rhs(small, RhsMode{RhsKind::exact_system, 0.0});
    Field rb = rhs(small, RhsMode{RhsKind::compact_coefficient, 0.0});
    double dmax = 0.0, smax = 0.0;
    for (std::size_t p = 0; p < ra.values.size(); ++p) {
        dmax = std::max(dmax, std::abs(ra.values[p] - rb.values[p]));
        smax = std::max(smax, std::abs(ra.values[p]));
    }
    CHECK(dmax <= 4.0 * 0.1 * 0.1 * smax); // difference is the cubic term
}

TEST_CASE("Gateaux derivative of the exact system at zero is i Laplacian") {
    GridSpec spec = make_grid(2, 32, 12.0);
    Field v = rescale_gradient(random_band_limited(spec, 29), 1.0);
    const double e = 1e-4;
    Field plus = rhs(scaled(v, e), RhsMode{RhsKind::exact_system, 0.0});
    Field minus = rhs(scaled(v, -e), RhsMode{RhsKind::exact_system, 0.0});
    Field lin = laplacian_i(v);
    double num = 0.0, den = 0.0;
    for (std::size_t p = 0; p < v.values.size(); ++p) {
        const Complex fd = (plus.values[p] - minus.values[p]) / (2.0 * e);
        num += std::norm(fd - lin.values[p]);
        den += std::norm(lin.values[p]);
    }
    CHECK(std::sqrt(num / den) < 1e-6);
}

TEST_CASE("remainder after removing the extracted cubic part") {
    GridSpec spec = make_grid(2, 64, 20.0);
    Field v = rescale_gradient(random_band_limited(spec, 41), 1.0);
    const RhsMode exact{RhsKind::exact_system, 0.0};

    auto nonlin = [&](double e) {
        Field f = scaled(v, e);
        Field r = rhs(f, exact);
        Field lin = laplacian_i(f);
        for (std::size_t p = 0; p < r.values.size(); ++p) r.values[p] -= lin.values[p];
        return r;
    };

    // Richardson in eps^2: T3 = (4 f(e) - f(2e)) / 3 with f(e) = N(e v)/e^3
    const double e0 = 2e-3;
    Field f1 = nonlin(e0);
    Field f2 = nonlin(2.0 * e0);
    Field t3 = Field::zeros(spec);
    for (std::size_t p = 0; p < t3.values.size(); ++p) {
        const Complex a = f1.values[p] / std::pow(e0, 3);
        const Complex b = f2.values[p] / std::pow(2.0 * e0, 3);
        t3.values[p] = (4.0 * a - b) / 3.0;
    }

    std::vector<double> eps = {4e-3, 8e-3, 1.6e-2};
    std::vector<double> rem;
    for (double e : eps) {
        Field r = nonlin(e);
        for (std::size_t p = 0; p < r.values.size(); ++p)
            r.values[p] -= std::pow(e, 3) * t3.values[p];
        rem.push_back(l2(r));
    }
    CHECK(loglog_slope(eps, rem) >= 3.7); // expected ~5: odd powers only
}

TEST_CASE("regularized mode dissipates curvature energy from the first step") {
    GridSpec spec = make_grid(2, 64, 20.0);
    Field f = initial_data(spec, InitKind::gaussian_packet, 5e-2, 2.0, 0.0, 0);
    const RhsMode reg{RhsKind::regularized, 0.1};

    auto a_l2_sq = [&](const Field& g) {
        GeometryBundle b = geometry_bundle(g, false);
        double acc = 0.0;
        const double hd = spec.spacing * spec.spacing;
        for (std::size_t p = 0; p < spec.point_count(); ++p)
            acc += b.curv.a_normsq[p] * b.metric.sqrt_det[p] * hd;
        return acc;
    };
    Field r = rhs(f, reg);
    const double dt = 1e-4;
    Field g = f;
    for (std::size_t p = 0; p < g.values.size(); ++p) g.values[p] += dt * r.values[p];
    CHECK(a_l2_sq(g) < a_l2_sq(f));

    Field a = rhs(f, RhsMode{RhsKind::regularized, 0.0});
    Field b = rhs(f, RhsMode{RhsKind::exact_system, 0.0});
    CHECK(max_abs_diff(a, b) < 1e-15);
}

TEST_CASE("normal velocity consistency of the graph reduction") {
    GridSpec spec = make_grid(2, 64, 20.0);
    CHECK(normal_velocity_check(Field::zeros(spec)) == 0.0);

    Field bump = initial_data(spec, InitKind::gaussian_packet, 1e-2, 2.0, 0.0, 0);
    GeometryBundle b = geometry_bundle(bump, false);
    double max_jh = 0.0;
    for (std::size_t p = 0; p < spec.point_count(); ++p) {
        double jj = 0.0;
        for (int c = 0; c < 4; ++c) {
            const double v = b.curv.JH[p * 4 + c];
            jj += v * v;
        }
        max_jh = std::max(max_jh, std::sqrt(jj));
    }
    CHECK(normal_velocity_check(bump) <= 1e-8 * max_jh);

    // cross-path residual (spectral velocity against the FD-oracle frame)
    // shrinks at the oracle's 4th order under refinement
    std::vector<double> hs, errs;
    for (int n : {32, 64, 128}) {
        GridSpec s = make_grid(2, n, 20.0);
        Field f = sample_field(s, [&](const std::array<double, 3>& x) {
            const double r2 = x[0] * x[0] + x[1] * x[1];
            return Complex(0.05 * std::exp(-r2 / (2.0 * 1.5 * 1.5)),
                           0.03 * std::exp(-r2 / (2.0 * 2.0 * 2.0)));
        });
        GraphVelocity gv = graph_velocity(f, 0.0);
        GeometryBundle fd = oracle::fd_geometry(f);
        double worst = 0.0;
        for (std::size_t p = 0; p < s.point_count(); ++p) {
            const double dtu1 = gv.dtphi.values[p].real();
            const double dtu2 = gv.dtphi.values[p].imag();
            for (int a = 0; a < 2; ++a) {
                const double* nu = a == 0 ? &fd.frame.nu1[p * 4] : &fd.frame.nu2[p * 4];
                const double* JH = &fd.curv.JH[p * 4];
                double vdot = dtu1 * nu[2] + dtu2 * nu[3];
                double jdot = 0.0;
                for (int c = 0; c < 4; ++c) jdot += JH[c] * nu[c];
                worst = std::max(worst, std::abs(vdot - jdot));
            }
        }
        hs.push_back(s.spacing);
        errs.push_back(worst);
    }
    CHECK(loglog_slope(hs, errs) >= 3.5);
}

TEST_CASE("initial data: zero amplitude, Gaussian mass, reproducibility") {
    GridSpec spec = make_grid(2, 64, 30.0);
    Field z = initial_data(spec, InitKind::gaussian_packet, 0.0, 1.0, 0.0, 0);
    CHECK(lp_norm(z, inf) == 0.0);

    const double amp = 0.7, w = 1.3;
    Field g = initial_data(spec, InitKind::gaussian_packet, amp, w, 0.4, 0);
    const double mass = lp_norm(g, 1.0);
    CHECK(mass == doctest::Approx(amp * 2.0 * M_PI * w * w).epsilon(1e-8));

    Field a = initial_data(spec, InitKind::random_smooth, 0.3, 1.0, 0.0, 99);
    Field b = initial_data(spec, InitKind::random_smooth, 0.3, 1.0, 0.0, 99);
    Field c = initial_data(spec, InitKind::random_smooth, 0.3, 1.0, 0.0, 100);
    CHECK(max_abs_diff(a, b) == 0.0); // bit-reproducible
    CHECK(max_abs_diff(a, c) > 0.0);
    CHECK(sobolev_norm(a, 4.0) == doctest::Approx(0.3).epsilon(1e-12));

    CHECK_THROWS_AS(initial_data(spec, InitKind::gaussian_packet, 0.1, -1.0, 0.0, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(init_kind_from_string("nope"), std::invalid_argument);
}

TEST_CASE("rhs rejects non-finite input") {
    GridSpec spec = make_grid(2, 16, 5.0);
    Field bad = Field::zeros(spec);
    bad.values[3] = Complex(0.0, std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(rhs(bad, RhsMode{RhsKind::exact_system, 0.0}), std::invalid_argument);
}
