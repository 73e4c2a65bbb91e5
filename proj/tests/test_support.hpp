#pragma once

#include "smcf/grid.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <random>

namespace smcf::test {

// Direct quadrature of |f(x)|^p h^d over the grid from an analytic sampler;
// shares nothing with the library's norm path.
inline double quad_lp(const GridSpec& spec,
                      const std::function<Complex(const std::array<double, 3>&)>& f, double p) {
    double hd = 1.0;
    for (int i = 0; i < spec.d; ++i) hd *= spec.spacing;
    double acc = 0.0;
    std::array<double, 3> x{0, 0, 0};
    for (int i0 = 0; i0 < spec.n; ++i0) {
        x[0] = spec.axis_coordinate(i0);
        for (int i1 = 0; i1 < (spec.d > 1 ? spec.n : 1); ++i1) {
            if (spec.d > 1) x[1] = spec.axis_coordinate(i1);
            for (int i2 = 0; i2 < (spec.d > 2 ? spec.n : 1); ++i2) {
                if (spec.d > 2) x[2] = spec.axis_coordinate(i2);
                acc += std::pow(std::abs(f(x)), p);
            }
        }
    }
    return std::pow(acc * hd, 1.0 / p);
}

// Band-limited random field, deterministic in the seed.
inline Field random_band_limited(const GridSpec& spec, unsigned seed, int kmax = 4) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpectralField s;
    s.spec = spec;
    s.coeffs.assign(spec.point_count(), Complex(0, 0));
    std::size_t p = 0;
    for (int j0 = 0; j0 < spec.n; ++j0)
        for (int j1 = 0; j1 < (spec.d > 1 ? spec.n : 1); ++j1)
            for (int j2 = 0; j2 < (spec.d > 2 ? spec.n : 1); ++j2, ++p) {
                const int ks[3] = {spec.wavenumber(j0), spec.d > 1 ? spec.wavenumber(j1) : 0,
                                   spec.d > 2 ? spec.wavenumber(j2) : 0};
                bool ok = true;
                for (int ax = 0; ax < spec.d; ++ax)
                    if (std::abs(ks[ax]) > kmax) ok = false;
                if (ok) s.coeffs[p] = Complex(gauss(rng), gauss(rng));
            }
    return synthesize(s);
}

// Rescale so that ||Du||_inf equals the target (gradient measured spectrally).
inline Field rescale_gradient(Field f, double target_sup_du) {
    double worst = 0.0;
    for (int i = 0; i < f.spec.d; ++i) {
        std::array<int, 3> a{0, 0, 0};
        a[i] = 1;
        Field df = derivative(f, a);
        for (std::size_t p = 0; p < df.values.size(); ++p)
            worst = std::max(worst, std::norm(df.values[p]));
    }
    // per-point |Du|^2 sums axes; the single-axis bound above is within sqrt(d)
    double sup = 0.0;
    {
        std::vector<double> acc(f.values.size(), 0.0);
        for (int i = 0; i < f.spec.d; ++i) {
            std::array<int, 3> a{0, 0, 0};
            a[i] = 1;
            Field df = derivative(f, a);
            for (std::size_t p = 0; p < df.values.size(); ++p) acc[p] += std::norm(df.values[p]);
        }
        for (double v : acc) sup = std::max(sup, v);
        sup = std::sqrt(sup);
    }
    if (sup > 0.0)
        for (Complex& v : f.values) v *= target_sup_du / sup;
    return f;
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double mx = 0.0, my = 0.0;
    const std::size_t m = xs.size();
    for (std::size_t i = 0; i < m; ++i) {
        mx += std::log(xs[i]);
        my += std::log(ys[i]);
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (std::log(xs[i]) - mx) * (std::log(xs[i]) - mx);
        sxy += (std::log(xs[i]) - mx) * (std::log(ys[i]) - my);
    }
    return sxy / sxx;
}

inline double rel_l2_diff(const Field& a, const Field& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t p = 0; p < a.values.size(); ++p) {
        num += std::norm(a.values[p] - b.values[p]);
        den += std::norm(a.values[p]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t p = 0; p < a.values.size(); ++p)
        m = std::max(m, std::abs(a.values[p] - b.values[p]));
    return m;
}

} // namespace smcf::test
