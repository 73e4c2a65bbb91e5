#include "smcf/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace smcf::oracle {

namespace {

// ---- stencil machinery ----------------------------------------------------

struct Indexer {
    int d, n;
    std::size_t stride[3];

    explicit Indexer(const GridSpec& spec) : d(spec.d), n(spec.n) {
        stride[d - 1] = 1;
        for (int ax = d - 2; ax >= 0; --ax)
            stride[ax] = stride[ax + 1] * static_cast<std::size_t>(n);
    }
    std::size_t shift(std::size_t p, int axis, int off) const {
        // periodic shift of a row-major flat index along one axis
        const std::size_t s = stride[axis];
        const std::size_t block = s * static_cast<std::size_t>(n);
        const std::size_t base = (p / block) * block;
        const std::size_t rem = p - base;
        const std::size_t line = rem / s; // coordinate along axis
        const std::size_t off_in = rem - line * s;
        const long long moved = (static_cast<long long>(line) + off + 4L * n) % n;
        return base + static_cast<std::size_t>(moved) * s + off_in;
    }
};

// 4th-order centered first derivative along one axis.
std::vector<double> stencil1(const Indexer& ix, const std::vector<double>& f, int axis, double h) {
    std::vector<double> out(f.size());
    const double c = 1.0 / (12.0 * h);
    for (std::size_t p = 0; p < f.size(); ++p) {
        out[p] = c * (-f[ix.shift(p, axis, 2)] + 8.0 * f[ix.shift(p, axis, 1)] -
                      8.0 * f[ix.shift(p, axis, -1)] + f[ix.shift(p, axis, -2)]);
    }
    return out;
}

// 4th-order centered second derivative along one axis.
std::vector<double> stencil2(const Indexer& ix, const std::vector<double>& f, int axis, double h) {
    std::vector<double> out(f.size());
    const double c = 1.0 / (12.0 * h * h);
    for (std::size_t p = 0; p < f.size(); ++p) {
        out[p] = c * (-f[ix.shift(p, axis, 2)] + 16.0 * f[ix.shift(p, axis, 1)] - 30.0 * f[p] +
                      16.0 * f[ix.shift(p, axis, -1)] - f[ix.shift(p, axis, -2)]);
    }
    return out;
}

// d x d inverse by cofactors (d <= 3).
void invert(int d, const double* a, double* out) {
    if (d == 1) {
        out[0] = 1.0 / a[0];
        return;
    }
    if (d == 2) {
        const double det = a[0] * a[3] - a[1] * a[2];
        out[0] = a[3] / det;
        out[1] = -a[1] / det;
        out[2] = -a[2] / det;
        out[3] = a[0] / det;
        return;
    }
    const double det = a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
                       a[2] * (a[3] * a[7] - a[4] * a[6]);
    out[0] = (a[4] * a[8] - a[5] * a[7]) / det;
    out[1] = (a[2] * a[7] - a[1] * a[8]) / det;
    out[2] = (a[1] * a[5] - a[2] * a[4]) / det;
    out[3] = (a[5] * a[6] - a[3] * a[8]) / det;
    out[4] = (a[0] * a[8] - a[2] * a[6]) / det;
    out[5] = (a[2] * a[3] - a[0] * a[5]) / det;
    out[6] = (a[3] * a[7] - a[4] * a[6]) / det;
    out[7] = (a[1] * a[6] - a[0] * a[7]) / det;
    out[8] = (a[0] * a[4] - a[1] * a[3]) / det;
}

double determinant(int d, const double* a) {
    if (d == 1) return a[0];
    if (d == 2) return a[0] * a[3] - a[1] * a[2];
    return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
           a[2] * (a[3] * a[7] - a[4] * a[6]);
}

} // namespace

GeometryBundle fd_geometry(const Field& f) {
    if (!f.finite()) throw std::invalid_argument("fd_geometry: non-finite field");
    const GridSpec& spec = f.spec;
    if (spec.n < 16) throw std::invalid_argument("fd_geometry: n must be >= 16");
    const int d = spec.d;
    const std::size_t N = spec.point_count();
    const double h = spec.spacing;
    const Indexer ix(spec);

    std::vector<double> u1(N), u2(N);
    for (std::size_t p = 0; p < N; ++p) {
        u1[p] = f.values[p].real();
        u2[p] = f.values[p].imag();
    }

    GeometryBundle b;
    b.der.spec = spec;
    b.der.du.assign(N * d * 2, 0.0);
    b.der.d2u.assign(N * d * d * 2, 0.0);

    for (int i = 0; i < d; ++i) {
        auto d1 = stencil1(ix, u1, i, h);
        auto d2 = stencil1(ix, u2, i, h);
        for (std::size_t p = 0; p < N; ++p) {
            b.der.du[(p * d + i) * 2 + 0] = d1[p];
            b.der.du[(p * d + i) * 2 + 1] = d2[p];
        }
        for (int j = i; j < d; ++j) {
            std::vector<double> h1, h2;
            if (i == j) {
                h1 = stencil2(ix, u1, i, h);
                h2 = stencil2(ix, u2, i, h);
            } else {
                h1 = stencil1(ix, d1, j, h);
                h2 = stencil1(ix, d2, j, h);
            }
            for (std::size_t p = 0; p < N; ++p) {
                b.der.d2u[((p * d + i) * d + j) * 2 + 0] = h1[p];
                b.der.d2u[((p * d + i) * d + j) * 2 + 1] = h2[p];
                b.der.d2u[((p * d + j) * d + i) * 2 + 0] = h1[p];
                b.der.d2u[((p * d + j) * d + i) * 2 + 1] = h2[p];
            }
        }
    }

    // metric, direct inversion
    b.metric.spec = spec;
    b.metric.du = b.der.du;
    b.metric.g.assign(N * d * d, 0.0);
    b.metric.ginv.assign(N * d * d, 0.0);
    b.metric.sqrt_det.assign(N, 0.0);
    for (std::size_t p = 0; p < N; ++p) {
        const double* du = &b.der.du[p * d * 2];
        double* g = &b.metric.g[p * d * d];
        double gradsq = 0.0;
        for (int i = 0; i < d; ++i) {
            gradsq += du[i * 2] * du[i * 2] + du[i * 2 + 1] * du[i * 2 + 1];
            for (int j = 0; j < d; ++j)
                g[i * d + j] =
                    (i == j ? 1.0 : 0.0) + du[i * 2] * du[j * 2] + du[i * 2 + 1] * du[j * 2 + 1];
        }
        if (gradsq > 1.0) b.metric.large_gradient = true;
        const double det = determinant(d, g);
        if (!(det > 0.0)) throw std::runtime_error("fd_geometry: singular metric");
        b.metric.sqrt_det[p] = std::sqrt(det);
        invert(d, g, &b.metric.ginv[p * d * d]);
    }

    // frame
    b.frame.spec = spec;
    b.frame.nu1.assign(N * (d + 2), 0.0);
    b.frame.nu2.assign(N * (d + 2), 0.0);
    b.frame.lambda.assign(N, 0.0);
    for (std::size_t p = 0; p < N; ++p) {
        const double* du = &b.der.du[p * d * 2];
        double* nu1 = &b.frame.nu1[p * (d + 2)];
        double* nu2 = &b.frame.nu2[p * (d + 2)];
        double du1sq = 0.0, dot = 0.0;
        for (int i = 0; i < d; ++i) {
            du1sq += du[i * 2] * du[i * 2];
            dot += du[i * 2] * du[i * 2 + 1];
        }
        const double sp = std::sqrt(1.0 + du1sq);
        for (int i = 0; i < d; ++i) nu1[i] = du[i * 2] / sp;
        nu1[d] = -1.0 / sp;
        nu1[d + 1] = 0.0;
        // raw (du2, 0, -1), Gram-Schmidt against nu1, then normalize
        double raw[5] = {0, 0, 0, 0, 0};
        for (int i = 0; i < d; ++i) raw[i] = du[i * 2 + 1];
        raw[d] = 0.0;
        raw[d + 1] = -1.0;
        double proj = 0.0;
        for (int c = 0; c < d + 2; ++c) proj += raw[c] * nu1[c];
        double norm = 0.0;
        for (int c = 0; c < d + 2; ++c) {
            raw[c] -= proj * nu1[c];
            norm += raw[c] * raw[c];
        }
        norm = std::sqrt(norm);
        b.frame.lambda[p] = norm;
        for (int c = 0; c < d + 2; ++c) nu2[c] = raw[c] / norm;
        (void)dot;
    }

    // second fundamental form, naive contractions
    b.curv.spec = spec;
    b.curv.h.assign(N * 2 * d * d, 0.0);
    b.curv.hcoef.assign(N * 2, 0.0);
    b.curv.H.assign(N * (d + 2), 0.0);
    b.curv.JH.assign(N * (d + 2), 0.0);
    b.curv.a_normsq.assign(N, 0.0);
    for (std::size_t p = 0; p < N; ++p) {
        const double* d2u = &b.der.d2u[p * d * d * 2];
        const double* gi = &b.metric.ginv[p * d * d];
        for (int a = 0; a < 2; ++a) {
            const double* nu = a == 0 ? &b.frame.nu1[p * (d + 2)] : &b.frame.nu2[p * (d + 2)];
            double tr = 0.0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    const double hij =
                        d2u[(i * d + j) * 2] * nu[d] + d2u[(i * d + j) * 2 + 1] * nu[d + 1];
                    b.curv.h[(p * 2 + a) * d * d + i * d + j] = hij;
                    tr += gi[i * d + j] * hij;
                }
            b.curv.hcoef[p * 2 + a] = tr;
        }
        double asq = 0.0;
        for (int a = 0; a < 2; ++a)
            for (int i = 0; i < d; ++i)
                for (int k = 0; k < d; ++k)
                    for (int j = 0; j < d; ++j)
                        for (int l = 0; l < d; ++l)
                            asq += gi[i * d + k] * gi[j * d + l] *
                                   b.curv.h[(p * 2 + a) * d * d + i * d + j] *
                                   b.curv.h[(p * 2 + a) * d * d + k * d + l];
        b.curv.a_normsq[p] = asq;
        const double h1 = b.curv.hcoef[p * 2 + 0];
        const double h2 = b.curv.hcoef[p * 2 + 1];
        for (int c = 0; c < d + 2; ++c) {
            b.curv.H[p * (d + 2) + c] =
                h1 * b.frame.nu1[p * (d + 2) + c] + h2 * b.frame.nu2[p * (d + 2) + c];
            b.curv.JH[p * (d + 2) + c] =
                h1 * b.frame.nu2[p * (d + 2) + c] - h2 * b.frame.nu1[p * (d + 2) + c];
        }
    }

    // Christoffel from stencil derivatives of the FD metric samples
    b.christoffel.assign(N * d * d * d, 0.0);
    std::vector<std::vector<double>> dg(d * d * d);
    std::vector<double> comp(N);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            for (std::size_t p = 0; p < N; ++p) comp[p] = b.metric.g[p * d * d + i * d + j];
            for (int m = 0; m < d; ++m) {
                auto dm = stencil1(ix, comp, m, h);
                dg[(m * d + i) * d + j] = dm;
                if (i != j) dg[(m * d + j) * d + i] = std::move(dm);
            }
        }
    for (std::size_t p = 0; p < N; ++p) {
        const double* gi = &b.metric.ginv[p * d * d];
        for (int l = 0; l < d; ++l)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double acc = 0.0;
                    for (int m = 0; m < d; ++m)
                        acc += gi[l * d + m] * (dg[(i * d + j) * d + m][p] +
                                                dg[(j * d + i) * d + m][p] -
                                                dg[(m * d + i) * d + j][p]);
                    b.christoffel[((p * d + l) * d + i) * d + j] = 0.5 * acc;
                }
    }
    return b;
}

std::vector<double> fd_nabla_a_normsq(const GeometryBundle& b) {
    const GridSpec& spec = b.metric.spec;
    const int d = spec.d;
    const std::size_t N = spec.point_count();
    const double h = spec.spacing;
    const Indexer ix(spec);

    std::vector<std::vector<double>> dh(d * 2 * d * d);
    std::vector<std::vector<double>> dnu(d * 2 * (d + 2));
    std::vector<double> comp(N);
    for (int a = 0; a < 2; ++a)
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                for (std::size_t p = 0; p < N; ++p)
                    comp[p] = b.curv.h[(p * 2 + a) * d * d + i * d + j];
                for (int k = 0; k < d; ++k) {
                    auto dk = stencil1(ix, comp, k, h);
                    dh[((k * 2 + a) * d + i) * d + j] = dk;
                    if (i != j) dh[((k * 2 + a) * d + j) * d + i] = std::move(dk);
                }
            }
    for (int bb = 0; bb < 2; ++bb)
        for (int c = 0; c < d + 2; ++c) {
            const std::vector<double>& nu = bb == 0 ? b.frame.nu1 : b.frame.nu2;
            for (std::size_t p = 0; p < N; ++p) comp[p] = nu[p * (d + 2) + c];
            for (int k = 0; k < d; ++k)
                dnu[(k * 2 + bb) * (d + 2) + c] = stencil1(ix, comp, k, h);
        }

    std::vector<double> out(N, 0.0);
    std::vector<double> na(d * 2 * d * d);
    for (std::size_t p = 0; p < N; ++p) {
        const double* gi = &b.metric.ginv[p * d * d];
        for (int k = 0; k < d; ++k)
            for (int a = 0; a < 2; ++a)
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) {
                        double acc = dh[((k * 2 + a) * d + i) * d + j][p];
                        for (int m = 0; m < d; ++m) {
                            acc -= b.christoffel[((p * d + m) * d + k) * d + i] *
                                   b.curv.h[(p * 2 + a) * d * d + m * d + j];
                            acc -= b.christoffel[((p * d + m) * d + k) * d + j] *
                                   b.curv.h[(p * 2 + a) * d * d + i * d + m];
                        }
                        for (int bb = 0; bb < 2; ++bb) {
                            const double* nua =
                                a == 0 ? &b.frame.nu1[p * (d + 2)] : &b.frame.nu2[p * (d + 2)];
                            double omega = 0.0;
                            for (int c = 0; c < d + 2; ++c)
                                omega += dnu[(k * 2 + bb) * (d + 2) + c][p] * nua[c];
                            acc += omega * b.curv.h[(p * 2 + bb) * d * d + i * d + j];
                        }
                        na[((k * 2 + a) * d + i) * d + j] = acc;
                    }
        double nsq = 0.0;
        for (int a = 0; a < 2; ++a)
            for (int k = 0; k < d; ++k)
                for (int kk = 0; kk < d; ++kk)
                    for (int i = 0; i < d; ++i)
                        for (int ii = 0; ii < d; ++ii)
                            for (int j = 0; j < d; ++j)
                                for (int jj = 0; jj < d; ++jj)
                                    nsq += gi[k * d + kk] * gi[i * d + ii] * gi[j * d + jj] *
                                           na[((k * 2 + a) * d + i) * d + j] *
                                           na[((kk * 2 + a) * d + ii) * d + jj];
        out[p] = nsq;
    }
    return out;
}

Field free_gaussian_exact(const GridSpec& spec, double amplitude, double width,
                          double modulation, double t) {
    if (!(width > 0.0)) throw std::invalid_argument("free_gaussian_exact: width must be positive");
    const Complex denom(2.0 * width * width, 4.0 * t); // 2 (w^2 + 2 i t)
    const Complex prefac = std::pow(Complex(1.0, 2.0 * t / (width * width)), -0.5);
    const double v = modulation;
    return sample_field(spec, [&](const std::array<double, 3>& x) {
        Complex val(amplitude, 0.0);
        for (int i = 0; i < spec.d; ++i) {
            const double shift = (i == 0) ? 2.0 * v * t : 0.0;
            const double y = x[i] - shift;
            val *= prefac * std::exp(-y * y / denom);
        }
        val *= std::polar(1.0, v * (x[0] - v * t));
        return val;
    });
}

const std::vector<std::string> comparable_quantities = {
    "metric",      "inverse_metric", "sqrt_det",       "christoffel",
    "frame",       "second_fundamental_form", "mean_curvature", "skew_mean_curvature",
    "a_normsq",    "nabla_a_normsq"};

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double quantity_error(const std::string& quantity, const Field& f) {
    GeometryBundle sp = geometry_bundle(f, true);
    GeometryBundle fd = fd_geometry(f);
    if (quantity == "metric") return max_abs_diff(sp.metric.g, fd.metric.g);
    if (quantity == "inverse_metric") return max_abs_diff(sp.metric.ginv, fd.metric.ginv);
    if (quantity == "sqrt_det") return max_abs_diff(sp.metric.sqrt_det, fd.metric.sqrt_det);
    if (quantity == "christoffel") return max_abs_diff(sp.christoffel, fd.christoffel);
    if (quantity == "frame") {
        double m = std::max(max_abs_diff(sp.frame.nu1, fd.frame.nu1),
                            max_abs_diff(sp.frame.nu2, fd.frame.nu2));
        return std::max(m, max_abs_diff(sp.frame.lambda, fd.frame.lambda));
    }
    if (quantity == "second_fundamental_form") return max_abs_diff(sp.curv.h, fd.curv.h);
    if (quantity == "mean_curvature") return max_abs_diff(sp.curv.H, fd.curv.H);
    if (quantity == "skew_mean_curvature") return max_abs_diff(sp.curv.JH, fd.curv.JH);
    if (quantity == "a_normsq") return max_abs_diff(sp.curv.a_normsq, fd.curv.a_normsq);
    if (quantity == "nabla_a_normsq") {
        NablaA na = covariant_derivative_A(sp.der, sp.metric, sp.christoffel, sp.frame, sp.curv);
        return max_abs_diff(na.normsq, fd_nabla_a_normsq(fd));
    }
    throw std::invalid_argument("compare: unknown quantity '" + quantity + "'");
}

} // namespace

OracleReport compare(const std::string& quantity, const std::vector<int>& resolutions, int d,
                     double length, const std::function<Field(const GridSpec&)>& make_field) {
    if (resolutions.size() < 3)
        throw std::invalid_argument("compare: need at least 3 resolutions");
    OracleReport rep;
    rep.quantity = quantity;
    for (int n : resolutions) {
        const GridSpec spec = make_grid(d, n, length);
        Field f = make_field(spec);
        rep.sizes.push_back(n);
        rep.max_abs_error.push_back(quantity_error(quantity, f));
    }
    double emax = 0.0;
    for (double e : rep.max_abs_error) emax = std::max(emax, e);
    if (emax <= 1e-13) {
        rep.order = std::numeric_limits<double>::infinity(); // exact agreement
        rep.pass = true;
        return rep;
    }
    // least-squares slope of log(err) vs log(h); h proportional to 1/n
    double mx = 0.0, my = 0.0;
    const std::size_t m = rep.sizes.size();
    std::vector<double> xs(m), ys(m);
    for (std::size_t i = 0; i < m; ++i) {
        xs[i] = std::log(length / rep.sizes[i]);
        ys[i] = std::log(std::max(rep.max_abs_error[i], 1e-300));
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    rep.order = sxy / sxx;
    rep.pass = rep.order >= 1.0;
    return rep;
}

Field bump_state(const GridSpec& spec) {
    const double s = spec.length / 12.0;
    return sample_field(spec, [&](const std::array<double, 3>& x) {
        double r2 = 0.0;
        for (int i = 0; i < spec.d; ++i) r2 += x[i] * x[i];
        const double env = std::exp(-r2 / (2.0 * s * s));
        double trig1 = 1.0, trig2 = 1.0;
        for (int i = 0; i < spec.d; ++i) {
            trig1 *= std::cos(2.0 * M_PI * x[i] / spec.length);
            trig2 *= std::sin(4.0 * M_PI * x[i] / spec.length);
        }
        return Complex(0.08 * env * (1.0 + 0.3 * trig1), 0.05 * env * (1.0 - 0.4 * trig2));
    });
}

} // namespace smcf::oracle
