// End-to-end acceptance suite: one pass/fail line per criterion.
// Usage: acceptance [criterion numbers...]   (default: all)

#include "smcf/diagnostics.hpp"
#include "smcf/dynamics.hpp"
#include "smcf/geometry.hpp"
#include "smcf/integrator.hpp"
#include "smcf/oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <vector>

using namespace smcf;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

int failures = 0;

double now() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void report(int criterion, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", pass ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double mx = 0.0, my = 0.0, sxx = 0.0, sxy = 0.0;
    const std::size_t m = xs.size();
    for (std::size_t i = 0; i < m; ++i) {
        mx += std::log(xs[i]);
        my += std::log(ys[i]);
    }
    mx /= m;
    my /= m;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (std::log(xs[i]) - mx) * (std::log(xs[i]) - mx);
        sxy += (std::log(xs[i]) - mx) * (std::log(ys[i]) - my);
    }
    return sxy / sxx;
}

StepControl control_with(double dt) {
    StepControl c;
    c.dt_init = dt;
    c.dt_min = 1e-12;
    c.dt_max = std::max(dt, 0.05);
    c.cfl_safety = 1.0;
    return c;
}

// march with a fixed dt, optionally grabbing snapshots and sampled records
SolverState march(Field phi0, const RhsMode& mode, double dt, double T,
                  const std::vector<double>& snap_times = {},
                  std::vector<std::pair<double, Field>>* snaps = nullptr,
                  std::vector<DiagnosticsRecord>* series = nullptr, double sample_dt = 0.0,
                  const ParameterPlan* plan = nullptr) {
    StepControl c = control_with(dt);
    SolverState st = make_state(std::move(phi0), c);
    if (series && plan) series->push_back(record(st.phi, 0.0, *plan));
    std::size_t next_snap = 0;
    const long steps = std::lround(T / dt);
    for (long i = 0; i < steps && st.status == RunStatus::running; ++i) {
        st = step(st, c, mode, dt);
        if (snaps && next_snap < snap_times.size() &&
            std::abs(st.t - snap_times[next_snap]) < 1e-6) {
            snaps->emplace_back(st.t, st.phi);
            ++next_snap;
        }
        if (series && plan && sample_dt > 0.0) {
            const double k = std::round(st.t / sample_dt);
            if (std::abs(st.t - k * sample_dt) < 1e-6)
                series->push_back(record(st.phi, st.t, *plan));
        }
    }
    return st;
}

Field reference_initial(int n) {
    GridSpec spec = make_grid(2, n, 100.0);
    return initial_data(spec, InitKind::gaussian_packet, 1e-2, 1.2, 0.0, 0);
}

double sup_gradient_of(const Field& f) {
    GraphDerivatives der = graph_derivatives(f);
    const int d = f.spec.d;
    double sup = 0.0;
    for (std::size_t p = 0; p < f.spec.point_count(); ++p) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            const double* du = &der.du[(p * d + i) * 2];
            s += du[0] * du[0] + du[1] * du[1];
        }
        sup = std::max(sup, s);
    }
    return std::sqrt(sup);
}

double max_skew_curvature(const Field& f) {
    GeometryBundle b = geometry_bundle(f, false);
    const int d = f.spec.d;
    double m = 0.0;
    for (std::size_t p = 0; p < f.spec.point_count(); ++p) {
        double jj = 0.0;
        for (int c = 0; c < d + 2; ++c) {
            const double v = b.curv.JH[p * (d + 2) + c];
            jj += v * v;
        }
        m = std::max(m, std::sqrt(jj));
    }
    return m;
}

// ---- criteria -------------------------------------------------------------

void criterion_1() {
    const double tic = now();
    GridSpec spec = make_grid(2, 128, 40.0);
    StepControl c = control_with(0.01);
    SolverState st = make_state(Field::zeros(spec), c);
    const RhsMode mode{RhsKind::exact_system, 0.0};
    for (int i = 0; i < 1000 && st.status == RunStatus::running; ++i)
        st = step(st, c, mode, 0.01);
    const double m = lp_norm(st.phi, inf);
    report(1, "flat-plane stationarity", st.status == RunStatus::running && m <= 1e-14,
           fmt("max|phi| = %.3g after 1000 steps (tol 1e-14)", m), now() - tic);
}

void criterion_2() {
    const double tic = now();
    bool pass = true;
    std::string detail;
    struct Case {
        int d;
        double lo, hi;
    };
    for (const Case& cs : {Case{2, -1.05, -0.95}, Case{1, -0.55, -0.45}}) {
        GridSpec spec = make_grid(cs.d, 512, 100.0);
        Field phi0 = oracle::free_gaussian_exact(spec, 1.0, 0.7, 0.0, 0.0);
        std::vector<DiagnosticsRecord> series;
        for (double t = 1.0; t <= 10.0 + 1e-9; t += 0.5) {
            DiagnosticsRecord r;
            r.t = t;
            r.linf = lp_norm(free_propagator(phi0, t), inf);
            series.push_back(r);
        }
        DecayFit fit = fit_decay_exponent(series, 1.0, 10.0, "linf");
        pass = pass && fit.slope >= cs.lo && fit.slope <= cs.hi;
        detail += fmt("d=%d slope %.4f in [%.2f, %.2f]; ", cs.d, fit.slope, cs.lo, cs.hi);
    }
    report(2, "linear dispersive sup-norm rate", pass, detail, now() - tic);
}

void criterion_3() {
    const double tic = now();
    GridSpec spec = make_grid(2, 64, 20.0);
    double worst = 0.0;
    for (unsigned seed = 1; seed <= 100; ++seed) {
        Field f = initial_data(spec, InitKind::random_smooth, 1.0, 1.0, 0.0, seed);
        const double target = 0.05 + 0.45 * ((seed - 1) % 10) / 9.0; // spread over (0, 0.5]
        const double sup = sup_gradient_of(f);
        for (Complex& v : f.values) v *= target / sup;
        worst = std::max(worst, check_curvature_equivalence(f));
    }
    report(3, "pointwise curvature equivalence", worst <= 1e-9,
           fmt("max violation %.3g over 100 states (tol 1e-9)", worst), now() - tic);
}

void criterion_4() {
    const double tic = now();
    GridSpec spec = make_grid(2, 64, 20.0);
    const RhsMode exact{RhsKind::exact_system, 0.0};
    bool pass = true;
    std::string detail;
    int idx = 0;
    for (InitKind kind :
         {InitKind::gaussian_packet, InitKind::sine_bump, InitKind::random_smooth}) {
        Field v = initial_data(spec, kind, 1.0, 2.0, kind == InitKind::sine_bump ? 0.9 : 0.5,
                               17 + idx);
        const double sup = sup_gradient_of(v);
        for (Complex& w : v.values) w /= sup;

        std::vector<double> eps = {1e-3, 2e-3, 4e-3, 8e-3}, resid;
        for (double e : eps) {
            Field f = v;
            for (Complex& w : f.values) w *= e;
            Field r = rhs(f, exact);
            for (int i = 0; i < 2; ++i) {
                std::array<int, 3> a{0, 0, 0};
                a[i] = 2;
                Field dii = derivative(f, a);
                for (std::size_t p = 0; p < r.values.size(); ++p)
                    r.values[p] -= Complex(0.0, 1.0) * dii.values[p];
            }
            resid.push_back(lp_norm(r, 2.0));
        }
        const double slope = loglog_slope(eps, resid);
        pass = pass && std::abs(slope - 3.0) <= 0.3;
        detail += fmt("profile %d slope %.3f; ", idx, slope);
        ++idx;
    }
    report(4, "cubic nonlinearity scaling", pass, detail + "(target 3.0 +- 0.3)", now() - tic);
}

void criterion_5() {
    const double tic = now();
    const RhsMode mode{RhsKind::exact_system, 0.0};

    Field phi0 = dealias(reference_initial(256));
    const double v0 = induced_volume(phi0);
    SolverState st = march(phi0, mode, 0.125, 10.0);
    const double drift_ref = std::abs(induced_volume(st.phi) - v0) / v0;
    bool pass = st.status == RunStatus::running && drift_ref <= 1e-3;
    std::string detail = fmt("reference drift %.3g (tol 1e-3); ", drift_ref);

    // dt halving on the pinned run; when every drift sits at the quadrature
    // rounding floor the rate is unmeasurable there, so the halving order is
    // also demonstrated at an amplitude where the time error is visible
    std::vector<double> dts = {2.0, 1.0, 0.5}, drifts;
    for (double dt : dts) {
        SolverState s = march(phi0, mode, dt, 10.0);
        drifts.push_back(std::abs(induced_volume(s.phi) - v0) / v0);
    }
    detail += fmt("ref-dt drifts {%.2g, %.2g, %.2g}; ", drifts[0], drifts[1], drifts[2]);
    const double floor = 1e-12;
    if (drifts[0] > floor && drifts[1] > floor) {
        const double order = std::log2(drifts[0] / drifts[1]);
        pass = pass && order >= 3.0;
        detail += fmt("halving order %.2f (>= 3); ", order);
    } else {
        detail += "at the rounding floor for every dt (conserved to measurement); ";
    }
    {
        GridSpec spec = make_grid(2, 128, 40.0);
        Field big = dealias(initial_data(spec, InitKind::gaussian_packet, 0.2, 1.2, 0.0, 0));
        const double bv0 = induced_volume(big);
        const double d0 =
            std::abs(induced_volume(march(big, mode, 0.4, 4.0).phi) - bv0) / bv0;
        const double d1 =
            std::abs(induced_volume(march(big, mode, 0.2, 4.0).phi) - bv0) / bv0;
        const double order = std::log2(d0 / d1);
        pass = pass && order >= 3.0;
        detail += fmt("measurable-amplitude halving order %.2f (>= 3)", order);
    }
    report(5, "volume conservation", pass, detail, now() - tic);
}

void criterion_6() {
    const double tic = now();
    const ParameterPlan plan = parameter_plan(2, 0.05);
    Field phi0 = dealias(reference_initial(256));
    const double t_wrap = wraparound_time(phi0);

    std::vector<DiagnosticsRecord> series;
    SolverState st = march(phi0, RhsMode{RhsKind::exact_system, 0.0}, 0.125, 10.0, {}, nullptr,
                           &series, 0.25, &plan);
    bool pass = st.status == RunStatus::running;

    double hk_max = 0.0;
    for (const auto& r : series) hk_max = std::max(hk_max, r.hk);
    const double hk0 = series.front().hk;
    pass = pass && hk_max <= 2.0 * hk0;

    DecayFit fit = fit_decay_exponent(series, 2.0, std::min(10.0, t_wrap), "w2qprime");
    pass = pass && fit.slope >= -1.1 && fit.slope <= -0.65;

    const double ce = check_curvature_equivalence(st.phi); // post-hoc on a solver-visited state
    pass = pass && ce <= 1e-9;
    report(6, "global Sobolev bound and W^{2,q'} decay", pass,
           fmt("Hk max/initial %.6f (<= 2); W-slope %.3f in [-1.10, -0.65] over [2, %.2f]; "
               "terminal equivalence violation %.2g",
               hk_max / hk0, fit.slope, std::min(10.0, t_wrap), ce),
           now() - tic);
}

void criterion_7() {
    const double tic = now();
    GridSpec spec = make_grid(2, 512, 256.0);
    Field phi0 = dealias(initial_data(spec, InitKind::gaussian_packet, 2e-2, 2.0, 0.0, 0));
    const double t_wrap = wraparound_time(phi0);

    std::vector<std::pair<double, Field>> snaps;
    SolverState st = march(phi0, RhsMode{RhsKind::exact_system, 0.0}, 0.125, 40.0,
                           {2.5, 5.0, 20.0, 40.0}, &snaps);
    bool pass = st.status == RunStatus::running && snaps.size() == 4 && t_wrap > 40.0;
    std::string detail = fmt("T_wrap %.1f (> 40); ", t_wrap);
    if (snaps.size() == 4) {
        ScatteringProfile prof = scattering_profile(snaps);
        const double early = prof.cauchy_h2[0][1]; // psi(5) - psi(2.5)
        const double late = prof.cauchy_h2[2][3];  // psi(40) - psi(20)
        pass = pass && late <= 0.5 * early;
        detail += fmt("|psi(40)-psi(20)|_H2 = %.3g vs 0.5*|psi(5)-psi(2.5)|_H2 = %.3g", late,
                      0.5 * early);
        double ce = 0.0; // post-hoc curvature-equivalence audit of visited states
        for (const auto& [t, f] : snaps) ce = std::max(ce, check_curvature_equivalence(f));
        pass = pass && ce <= 1e-9;
        detail += fmt("; snapshot equivalence violation %.2g", ce);
    } else {
        detail += fmt("snapshot capture failed (%zu)", snaps.size());
    }
    report(7, "scattering Cauchy tail", pass, detail, now() - tic);
}

void criterion_8() {
    const double tic = now();
    bool pass = true;
    std::string detail;
    for (const std::string& q : oracle::comparable_quantities) {
        oracle::OracleReport rep = oracle::compare(q, {32, 64, 128}, 2, 20.0, oracle::bump_state);
        const bool ok = std::isinf(rep.order) || rep.order >= 3.5;
        pass = pass && ok && rep.pass;
        if (!ok) detail += fmt("%s order %.2f! ", q.c_str(), rep.order);
    }
    if (detail.empty()) detail = "all geometry quantities at order >= 3.5 over n in {32,64,128}";
    report(8, "oracle equivalence", pass, detail, now() - tic);
}

void criterion_9() {
    const double tic = now();
    Field phi0 = reference_initial(256);
    const double resid = normal_velocity_check(phi0);
    const double jh = max_skew_curvature(phi0);
    bool pass = resid <= 1e-8 * jh;
    std::string detail = fmt("residual %.3g <= 1e-8*max|JH| = %.3g; ", resid, 1e-8 * jh);

    // refinement: spectral graph velocity against the independent FD frame
    std::vector<double> hs, errs;
    for (int n : {128, 256, 512}) {
        Field f = reference_initial(n);
        GraphVelocity gv = graph_velocity(f, 0.0);
        GeometryBundle fd = oracle::fd_geometry(f);
        double worst = 0.0;
        for (std::size_t p = 0; p < f.spec.point_count(); ++p) {
            const double dtu1 = gv.dtphi.values[p].real();
            const double dtu2 = gv.dtphi.values[p].imag();
            for (int a = 0; a < 2; ++a) {
                const double* nu = a == 0 ? &fd.frame.nu1[p * 4] : &fd.frame.nu2[p * 4];
                const double* JH = &fd.curv.JH[p * 4];
                const double vdot = dtu1 * nu[2] + dtu2 * nu[3];
                double jdot = 0.0;
                for (int c = 0; c < 4; ++c) jdot += JH[c] * nu[c];
                worst = std::max(worst, std::abs(vdot - jdot));
            }
        }
        hs.push_back(f.spec.spacing);
        errs.push_back(worst);
    }
    const double order = loglog_slope(hs, errs);
    pass = pass && order >= 3.5;
    report(9, "graph-ansatz consistency", pass,
           detail + fmt("cross-oracle refinement order %.2f (>= 3.5)", order), now() - tic);
}

void criterion_10() {
    const double tic = now();
    GridSpec spec = make_grid(2, 64, 20.0);
    Field phi0 = dealias(initial_data(spec, InitKind::gaussian_packet, 0.2, 1.5, 0.5, 0));
    const RhsMode mode{RhsKind::exact_system, 0.0};
    const double T = 1.0;

    auto terminal = [&](double dt) { return march(phi0, mode, dt, T).phi; };
    std::vector<double> dts = {T / 8.0, T / 16.0, T / 32.0};
    Field ref = terminal(dts.back() / 8.0);
    std::vector<double> errs;
    for (double dt : dts) {
        Field f = terminal(dt);
        double e = 0.0;
        for (std::size_t p = 0; p < f.values.size(); ++p)
            e = std::max(e, std::abs(f.values[p] - ref.values[p]));
        errs.push_back(e);
    }
    bool pass = true;
    std::string detail;
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        const double order = std::log2(errs[i] / errs[i + 1]);
        pass = pass && order >= 3.7 && order <= 4.3;
        detail += fmt("order %.2f; ", order);
    }
    report(10, "integrator self-convergence", pass, detail + "(target 3.7-4.3)", now() - tic);
}

} // namespace

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
    auto enabled = [&](int k) { return wanted.empty() || wanted.count(k); };

    const std::vector<std::pair<int, std::function<void()>>> criteria = {
        {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4},
        {5, criterion_5}, {6, criterion_6}, {7, criterion_7}, {8, criterion_8},
        {9, criterion_9}, {10, criterion_10}};
    for (const auto& [num, fn] : criteria)
        if (enabled(num)) fn();

    if (failures)
        std::printf("%d criterion(s) FAILED\n", failures);
    else
        std::printf("all criteria passed\n");
    return failures == 0 ? 0 : 1;
}
