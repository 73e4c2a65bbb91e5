#include "smcf/diagnostics.hpp"

#include "smcf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace smcf {

double DiagnosticsRecord::column(const std::string& name) const {
    if (name == "t") return t;
    if (name == "l2") return l2;
    if (name == "h2") return h2;
    if (name == "hk") return hk;
    if (name == "w2qprime") return w2qprime;
    if (name == "sup_du") return sup_du;
    if (name == "sup_d2u") return sup_d2u;
    if (name == "volume") return volume;
    if (name == "a_l2_sq") return a_l2_sq;
    if (name == "a_sup") return a_sup;
    if (name == "grad_a_l2_sq") return grad_a_l2_sq;
    if (name == "linf") return linf;
    throw std::invalid_argument("unknown diagnostics column '" + name + "'");
}

const std::vector<std::string>& DiagnosticsRecord::column_names() {
    static const std::vector<std::string> names = {
        "t",      "l2",      "h2",     "hk",       "w2qprime",     "sup_du",
        "sup_d2u", "volume", "a_l2_sq", "a_sup", "grad_a_l2_sq", "linf"};
    return names;
}

ParameterPlan parameter_plan(int d, double delta) {
    if (d < 1) throw std::invalid_argument("parameter_plan: d must be >= 1");
    if (!(delta > 0.0)) throw std::invalid_argument("parameter_plan: delta must be positive");
    const double inv_q = 1.0 / d + 0.5 - delta;
    if (!(inv_q > 0.5 && inv_q < 1.0))
        throw std::invalid_argument("parameter_plan: delta puts q outside (1, 2)");
    ParameterPlan plan;
    plan.d = d;
    plan.delta = delta;
    plan.q = 1.0 / inv_q;
    plan.q_prime = plan.q / (plan.q - 1.0);
    const double bound = std::max(0.5 * (d + 7.0), d + 1.0);
    plan.k = static_cast<int>(std::floor(bound)) + 1; // smallest integer strictly above
    if (plan.k <= bound) ++plan.k;
    plan.k0 = d / 2 + 3;
    plan.decay_exponent = 0.5 * d * (2.0 * inv_q - 1.0);
    return plan;
}

DiagnosticsRecord record(const Field& phi, double t, const ParameterPlan& plan) {
    if (!phi.finite()) throw std::invalid_argument("record: non-finite field");
    DiagnosticsRecord r;
    r.t = t;
    r.l2 = lp_norm(phi, 2.0);
    r.h2 = sobolev_norm(phi, 2.0);
    r.hk = sobolev_norm(phi, plan.k);
    r.w2qprime = wkp_norm(phi, 2, plan.q_prime);
    r.linf = lp_norm(phi, std::numeric_limits<double>::infinity());

    GeometryBundle b = geometry_bundle(phi, true);
    NablaA na = covariant_derivative_A(b.der, b.metric, b.christoffel, b.frame, b.curv);
    const GridSpec& spec = phi.spec;
    const std::size_t N = spec.point_count();
    const int d = spec.d;
    double hd = 1.0;
    for (int i = 0; i < d; ++i) hd *= spec.spacing;

    double sup_du = 0.0, vol = 0.0, a2 = 0.0, asup = 0.0, ga2 = 0.0;
    for (std::size_t p = 0; p < N; ++p) {
        double dusq = 0.0;
        for (int i = 0; i < d; ++i) {
            const double* du = &b.der.du[(p * d + i) * 2];
            dusq += du[0] * du[0] + du[1] * du[1];
        }
        sup_du = std::max(sup_du, std::sqrt(dusq));
        const double mu = b.metric.sqrt_det[p] * hd;
        vol += mu;
        a2 += b.curv.a_normsq[p] * mu;
        asup = std::max(asup, std::sqrt(std::max(0.0, b.curv.a_normsq[p])));
        ga2 += na.normsq[p] * mu;
    }
    r.sup_du = sup_du;
    r.volume = vol;
    r.a_l2_sq = a2;
    r.a_sup = asup;
    r.grad_a_l2_sq = std::max(0.0, ga2);

    double sup_d2u = 0.0;
    for (std::size_t p = 0; p < N; ++p) {
        double s = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const double* v = &b.der.d2u[((p * d + i) * d + j) * 2];
                s += v[0] * v[0] + v[1] * v[1];
            }
        sup_d2u = std::max(sup_d2u, std::sqrt(s));
    }
    r.sup_d2u = sup_d2u;
    return r;
}

DecayFit fit_decay_exponent(const std::vector<DiagnosticsRecord>& series, double t_lo,
                            double t_hi, const std::string& column) {
    if (t_lo < 1.0) throw std::invalid_argument("fit_decay_exponent: t_lo must be >= 1");
    std::vector<double> xs, ys;
    for (const auto& r : series) {
        if (r.t < t_lo || r.t > t_hi) continue;
        const double y = r.column(column);
        if (!(y > 0.0)) {
            if (y == 0.0) continue; // log undefined; power-law fit skips exact zeros
            throw std::invalid_argument("fit_decay_exponent: negative column value");
        }
        xs.push_back(std::log(r.t));
        ys.push_back(std::log(y));
    }
    if (xs.size() < 8)
        throw std::invalid_argument("fit_decay_exponent: fewer than 8 samples in window");

    const std::size_t m = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
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
    DecayFit fit;
    fit.count = static_cast<int>(m);
    fit.slope = sxy / sxx;
    const double intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double resid = ys[i] - (intercept + fit.slope * xs[i]);
        ss += resid * resid;
    }
    fit.stderr_slope = m > 2 ? std::sqrt(ss / (m - 2) / sxx) : 0.0;
    return fit;
}

double check_curvature_equivalence(const Field& phi) {
    GeometryBundle b = geometry_bundle(phi, false);
    const GridSpec& spec = phi.spec;
    const int d = spec.d;
    const std::size_t N = spec.point_count();
    double worst = 0.0;
    for (std::size_t p = 0; p < N; ++p) {
        double dusq = 0.0, d2sq = 0.0;
        for (int i = 0; i < d; ++i) {
            const double* du = &b.der.du[(p * d + i) * 2];
            dusq += du[0] * du[0] + du[1] * du[1];
            for (int j = 0; j < d; ++j) {
                const double* v = &b.der.d2u[((p * d + i) * d + j) * 2];
                d2sq += v[0] * v[0] + v[1] * v[1];
            }
        }
        const double asq = b.curv.a_normsq[p];
        const double upper = (1.0 + dusq) * (1.0 + dusq) * (1.0 + dusq) * asq;
        const double norm = 1.0 + d2sq;
        worst = std::max(worst, std::max(0.0, asq - d2sq) / norm);
        worst = std::max(worst, std::max(0.0, d2sq - upper) / norm);
    }
    return worst;
}

double hamilton_ratio(const Field& phi, int i, int j) {
    if (i != 1 || j != 1)
        throw std::invalid_argument("hamilton_ratio: only (i, j) = (1, 1) supported");
    GeometryBundle b = geometry_bundle(phi, true);
    NablaA na = covariant_derivative_A(b.der, b.metric, b.christoffel, b.frame, b.curv);
    const GridSpec& spec = phi.spec;
    const std::size_t N = spec.point_count();
    double hd = 1.0;
    for (int ax = 0; ax < spec.d; ++ax) hd *= spec.spacing;

    const double expo = static_cast<double>(i) / j;
    double lhs = 0.0, rhs_int = 0.0, max_a = 0.0;
    for (std::size_t p = 0; p < N; ++p) {
        const double mu = b.metric.sqrt_det[p] * hd;
        lhs += std::pow(std::max(0.0, na.normsq[p]), expo) * mu; // |grad^j A|^{2i/j}
        rhs_int += std::max(0.0, na.normsq[p]) * mu;             // |grad^i A|^2, i = 1
        max_a = std::max(max_a, std::sqrt(std::max(0.0, b.curv.a_normsq[p])));
    }
    const double rhs = std::pow(max_a, 2.0 * (expo - 1.0)) * rhs_int;
    if (rhs == 0.0) return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return lhs / rhs;
}

ScatteringProfile scattering_profile(const std::vector<std::pair<double, Field>>& snapshots) {
    if (snapshots.size() < 3)
        throw std::invalid_argument("scattering_profile: need at least 3 snapshots");
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        if (snapshots[i].first < 1.0)
            throw std::invalid_argument("scattering_profile: snapshot times must be >= 1");
        if (i > 0 && !(snapshots[i].first > snapshots[i - 1].first))
            throw std::invalid_argument("scattering_profile: snapshot times must increase");
        if (snapshots[i].second.spec != snapshots[0].second.spec)
            throw std::invalid_argument("scattering_profile: inconsistent grids");
    }
    ScatteringProfile out;
    for (const auto& [t, phi] : snapshots) {
        out.times.push_back(t);
        out.psi.push_back(free_propagator(phi, -t));
    }
    const std::size_t m = out.psi.size();
    out.cauchy_h2.assign(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            Field diff = out.psi[i];
            for (std::size_t p = 0; p < diff.values.size(); ++p)
                diff.values[p] -= out.psi[j].values[p];
            const double dist = sobolev_norm(diff, 2.0);
            out.cauchy_h2[i][j] = dist;
            out.cauchy_h2[j][i] = dist;
        }
    out.phi_plus = out.psi.back();
    return out;
}

EnergyReport energy_monitor(const std::vector<DiagnosticsRecord>& series) {
    if (series.size() < 3)
        throw std::invalid_argument("energy_monitor: need at least 3 records");
    EnergyReport rep;
    rep.first_step_delta_a = series[1].a_l2_sq - series[0].a_l2_sq;
    std::vector<double> abs_ratios;
    for (std::size_t i = 1; i + 1 < series.size(); ++i) {
        const double dt = series[i + 1].t - series[i - 1].t;
        if (!(dt > 0.0)) continue;
        const double da = (series[i + 1].a_l2_sq - series[i - 1].a_l2_sq) / dt;
        const double dg = (series[i + 1].grad_a_l2_sq - series[i - 1].grad_a_l2_sq) / dt;
        const double den_a = series[i].a_sup * series[i].a_sup * series[i].a_l2_sq;
        const double den_g = series[i].a_sup * series[i].a_sup * series[i].grad_a_l2_sq;
        const double ra = den_a > 0.0 ? da / den_a : 0.0;
        const double rg = den_g > 0.0 ? dg / den_g : 0.0;
        rep.times.push_back(series[i].t);
        rep.ratio_a.push_back(ra);
        rep.ratio_grad_a.push_back(rg);
        if (!std::isfinite(ra) || !std::isfinite(rg)) rep.finite = false;
        abs_ratios.push_back(std::abs(ra));
        abs_ratios.push_back(std::abs(rg));
    }
    if (!abs_ratios.empty()) {
        std::vector<double> sorted = abs_ratios;
        std::sort(sorted.begin(), sorted.end());
        rep.median_abs_ratio = sorted[sorted.size() / 2];
        rep.max_abs_ratio = sorted.back();
        rep.bounded = rep.max_abs_ratio <= 10.0 * std::max(rep.median_abs_ratio, 1e-300) ||
                      rep.max_abs_ratio == 0.0;
    }
    return rep;
}

double volume_drift(const std::vector<DiagnosticsRecord>& series) {
    if (series.size() < 2) throw std::invalid_argument("volume_drift: need at least 2 records");
    const double v0 = series.front().volume;
    if (!(v0 > 0.0)) throw std::invalid_argument("volume_drift: nonpositive initial volume");
    double worst = 0.0;
    for (const auto& r : series) worst = std::max(worst, std::abs(r.volume - v0) / v0);
    return worst;
}

} // namespace smcf
