#include "smcf/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace smcf {

namespace {

inline int sq(int d, int i, int j) { return i * d + j; }

double sup_gradient(const Field& phi) {
    GraphDerivatives der = graph_derivatives(phi);
    const int d = phi.spec.d;
    const std::size_t N = phi.spec.point_count();
    double worst = 0.0;
    for (std::size_t p = 0; p < N; ++p) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            const double* du = &der.du[(p * d + i) * 2];
            s += du[0] * du[0] + du[1] * du[1];
        }
        worst = std::max(worst, s);
    }
    return std::sqrt(worst);
}

Field axpy(const Field& x, double a, const Field& y) {
    Field out = x;
    for (std::size_t p = 0; p < out.values.size(); ++p) out.values[p] += a * y.values[p];
    return out;
}

} // namespace

std::string to_string(RunStatus s) {
    switch (s) {
    case RunStatus::running: return "running";
    case RunStatus::finished: return "finished";
    case RunStatus::blown_up: return "blown_up";
    case RunStatus::error: return "error";
    }
    return "?";
}

void StepControl::validate() const {
    if (!(dt_min > 0.0 && dt_min <= dt_init && dt_init <= dt_max))
        throw std::invalid_argument("step control: need 0 < dt_min <= dt_init <= dt_max");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
        throw std::invalid_argument("step control: cfl_safety must be in (0, 1]");
}

SolverState make_state(Field phi0, const StepControl& control) {
    control.validate();
    SolverState st;
    st.phi = std::move(phi0);
    st.dt = control.dt_init;
    st.status = RunStatus::running;
    if (!st.phi.finite()) {
        st.status = RunStatus::blown_up;
        st.message = "non-finite initial field";
    }
    return st;
}

SolverState step(const SolverState& state, const StepControl& control, const RhsMode& mode,
                 double dt, int direction) {
    if (state.status != RunStatus::running)
        throw std::logic_error("step: solver is not running");
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    mode.validate();

    auto E = [&](const Field& f, double tau) { return linear_propagator(f, mode, tau, direction); };
    auto N = [&](const Field& f) {
        Field r = nonlinear_residual(f, mode);
        if (direction < 0)
            for (Complex& v : r.values) v = -v;
        return r;
    };

    const Field& phi = state.phi;
    // phi_{n+1} = E(dt) phi + dt/6 [E(dt) k1 + 2 E(dt/2)(k2 + k3) + k4]
    Field k1 = N(phi);
    Field half = E(axpy(phi, 0.5 * dt, k1), 0.5 * dt);
    Field k2 = N(half);
    Field phi_half = E(phi, 0.5 * dt);
    Field k3 = N(axpy(phi_half, 0.5 * dt, k2));
    Field e_k3 = E(k3, 0.5 * dt);
    Field phi_full = E(phi_half, 0.5 * dt);
    Field k4 = N(axpy(phi_full, dt, e_k3));

    Field e_k1 = E(k1, dt);
    Field e_k23 = E(axpy(k2, 1.0, k3), 0.5 * dt);

    SolverState next = state;
    next.phi = phi_full;
    for (std::size_t p = 0; p < next.phi.values.size(); ++p)
        next.phi.values[p] +=
            dt / 6.0 * (e_k1.values[p] + 2.0 * e_k23.values[p] + k4.values[p]);
    next.t = state.t + direction * dt;
    next.dt = dt;
    next.step_count = state.step_count + 1;

    if (!next.phi.finite()) {
        next.status = RunStatus::blown_up;
        next.message = "non-finite value in field";
        return next;
    }
    double vmax = 0.0;
    for (const Complex& v : next.phi.values) vmax = std::max(vmax, std::abs(v));
    if (vmax > control.blowup_value_threshold) {
        next.status = RunStatus::blown_up;
        next.message = "max|phi| = " + std::to_string(vmax) + " exceeds threshold";
        return next;
    }
    if (mode.kind != RhsKind::linear) {
        const double g = sup_gradient(next.phi);
        if (g > control.blowup_grad_threshold) {
            next.status = RunStatus::blown_up;
            next.message = "||Du||_inf = " + std::to_string(g) + " exceeds threshold";
            return next;
        }
    }
    return next;
}

double adapt_dt(const SolverState& state, const StepControl& control) {
    const GridSpec& spec = state.phi.spec;
    const int d = spec.d;
    const std::size_t N = spec.point_count();

    GraphDerivatives der = graph_derivatives(state.phi);
    MetricData metric = assemble_metric(der);
    FrameData frame = normal_frame(der);

    double dev = 0.0;
    for (std::size_t p = 0; p < N; ++p) {
        const double* du = &der.du[p * d * 2];
        double du1sq = 0.0;
        for (int i = 0; i < d; ++i) du1sq += du[i * 2] * du[i * 2];
        const double c = 1.0 / (frame.lambda[p] * std::sqrt(1.0 + du1sq));
        double fro = 0.0;
        const double* gi = &metric.ginv[p * d * d];
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const double t = c * gi[sq(d, i, j)] - (i == j ? 1.0 : 0.0);
                fro += t * t;
            }
        dev = std::max(dev, std::sqrt(fro));
    }

    const double xi_axis = M_PI * spec.n / spec.length;
    const double xi_max_sq = d * xi_axis * xi_axis;
    double dt = control.cfl_safety / (1.0 + dev * xi_max_sq);
    dt = std::min(dt, 2.0 * state.dt);
    dt = std::min(dt, control.dt_max);
    // no lower clamp: a formula value below dt_min is the caller's error signal
    return dt;
}

RunResult run(const RunConfig& cfg, const RunSinks& sinks) {
    validate_config(cfg);
    const GridSpec spec = make_grid(cfg.grid.d, cfg.grid.n, cfg.grid.length);
    Field phi0 = initial_data(spec, cfg.init.kind, cfg.init.amplitude, cfg.init.width,
                              cfg.init.modulation, cfg.init.seed);
    phi0 = dealias(phi0); // band-limit before the first nonlinear product

    StepControl control;
    control.dt_init = cfg.solver.dt_init;
    control.cfl_safety = cfg.solver.cfl_safety;
    control.dt_min = cfg.solver.dt_min;
    control.dt_max = cfg.solver.dt_max;

    RhsMode mode{cfg.solver.mode, cfg.solver.lambda};
    mode.validate();

    const ParameterPlan plan = parameter_plan(cfg.grid.d, cfg.diagnostics.delta);

    RunResult result;
    SolverState st = make_state(std::move(phi0), control);

    const double t_end = cfg.solver.t_end;
    const double sample_dt = cfg.diagnostics.sample_dt;
    constexpr double t_eps = 1e-9;

    std::set<double> snapshot_times(cfg.diagnostics.snapshot_times.begin(),
                                    cfg.diagnostics.snapshot_times.end());

    auto emit_record = [&](const SolverState& s) {
        DiagnosticsRecord r = record(s.phi, s.t, plan);
        result.series.push_back(r);
        if (sinks.on_record) sinks.on_record(r);
    };
    auto maybe_snapshot = [&](const SolverState& s) {
        for (auto it = snapshot_times.begin(); it != snapshot_times.end();) {
            if (std::abs(*it - s.t) <= t_eps) {
                if (sinks.on_snapshot) sinks.on_snapshot(s.t, s.phi);
                it = snapshot_times.erase(it);
            } else {
                ++it;
            }
        }
    };

    emit_record(st);
    maybe_snapshot(st);

    long next_sample = 1;
    while (st.status == RunStatus::running && st.t < t_end - t_eps) {
        double dt = adapt_dt(st, control);
        if (dt < control.dt_min * (1.0 - 1e-12)) {
            st.status = RunStatus::error;
            st.message = "adapted dt fell below dt_min";
            break;
        }
        // shave the step to land exactly on the next event time
        double next_event = t_end;
        if (sample_dt > 0.0) next_event = std::min(next_event, next_sample * sample_dt);
        for (double ts : snapshot_times)
            if (ts > st.t + t_eps) {
                next_event = std::min(next_event, ts);
                break;
            }
        dt = std::min(dt, next_event - st.t);
        if (dt <= 0.0) dt = t_eps;

        st = step(st, control, mode, dt);
        if (st.status != RunStatus::running) break;

        maybe_snapshot(st);
        if (std::abs(st.t - next_sample * sample_dt) <= t_eps) {
            emit_record(st);
            ++next_sample;
        }
    }

    if (st.status == RunStatus::running) {
        st.status = RunStatus::finished;
        // make sure the terminal record exists even if t_end is not a sample multiple
        if (result.series.empty() || std::abs(result.series.back().t - st.t) > t_eps) {
            emit_record(st);
        }
        maybe_snapshot(st);
    }
    result.final_state = std::move(st);
    return result;
}

} // namespace smcf
