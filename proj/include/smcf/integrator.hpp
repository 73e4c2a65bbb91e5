#pragma once

#include "smcf/config.hpp"
#include "smcf/diagnostics.hpp"
#include "smcf/dynamics.hpp"
#include "smcf/grid.hpp"

#include <functional>
#include <string>
#include <vector>

namespace smcf {

enum class RunStatus { running, finished, blown_up, error };

std::string to_string(RunStatus s);

struct SolverState {
    double t = 0.0;
    Field phi;
    long step_count = 0;
    double dt = 0.0;
    RunStatus status = RunStatus::running;
    std::string message; // offending diagnostic on blow-up / error
};

struct StepControl {
    double dt_init = 0.01;
    double cfl_safety = 0.5;
    double dt_min = 1e-9;
    double dt_max = 0.05;
    double blowup_grad_threshold = 1.0;  // bound on ||Du||_inf
    double blowup_value_threshold = 1e3; // bound on |phi|

    void validate() const;
};

SolverState make_state(Field phi0, const StepControl& control);

/// One integrating-factor RK4 step of size dt: the linear semigroup is applied
/// exactly, classical RK4 advances the pulled-back nonlinear residual.
/// direction = -1 steps the reversed-rotation flow (lambda must be 0).
SolverState step(const SolverState& state, const StepControl& control, const RhsMode& mode,
                 double dt, int direction = +1);

/// cfl_safety / (1 + max|c g^{ij} - delta_ij|_F * |xi_max|^2), clamped to
/// [dt_min, dt_max] and to at most 2x the previous step.
double adapt_dt(const SolverState& state, const StepControl& control);

struct RunSinks {
    std::function<void(const DiagnosticsRecord&)> on_record;
    std::function<void(double t, const Field&)> on_snapshot;
};

struct RunResult {
    SolverState final_state;
    std::vector<DiagnosticsRecord> series;
};

/// Advance the configured initial state from t = 0 to t_end (or blow-up),
/// emitting records every sample_dt and snapshots at the configured times.
/// Deterministic given the config (and its seed).
RunResult run(const RunConfig& cfg, const RunSinks& sinks = {});

} // namespace smcf
