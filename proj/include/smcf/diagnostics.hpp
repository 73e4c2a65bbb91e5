#pragma once

#include "smcf/grid.hpp"

#include <string>
#include <vector>

namespace smcf {

/// One time-stamped measurement row; column order matches series.csv.
struct DiagnosticsRecord {
    double t = 0.0;
    double l2 = 0.0;
    double h2 = 0.0;
    double hk = 0.0;        // H^k with k from the parameter plan
    double w2qprime = 0.0;  // W^{2,q'} with q' from the plan
    double sup_du = 0.0;
    double sup_d2u = 0.0;
    double volume = 0.0;
    double a_l2_sq = 0.0;      // int |A|^2_g dmu
    double a_sup = 0.0;        // ||A||_{H^{0,inf}}
    double grad_a_l2_sq = 0.0; // int |nabla A|^2_g dmu
    double linf = 0.0;

    double column(const std::string& name) const;
    static const std::vector<std::string>& column_names();
};

/// Exponents and regularity indices from the small-data global theory:
/// 1/q = 1/d + 1/2 - delta, q' = q/(q-1), decay exponent (d/2)(2/q - 1),
/// k the smallest integer above max((d+7)/2, d+1), k0 = floor(d/2) + 3.
struct ParameterPlan {
    int d = 0;
    double delta = 0.0;
    double q = 0.0;
    double q_prime = 0.0;
    int k = 0;
    int k0 = 0;
    double decay_exponent = 0.0;
};

ParameterPlan parameter_plan(int d, double delta);

DiagnosticsRecord record(const Field& phi, double t, const ParameterPlan& plan);

struct DecayFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
    int count = 0;
};

/// Least-squares slope of log(column) vs log(t) over t in [t_lo, t_hi];
/// needs >= 8 samples and t_lo >= 1.
DecayFit fit_decay_exponent(const std::vector<DiagnosticsRecord>& series, double t_lo,
                            double t_hi, const std::string& column);

/// Max normalized violation of |A|^2_g <= |D^2 u|^2 <= (1+|Du|^2)^3 |A|^2_g
/// over the grid (each side clamped at zero, normalized by 1 + |D^2 u|^2).
double check_curvature_equivalence(const Field& phi);

/// Monitored interpolation-inequality ratio for T = A, (i, j) = (1, 1):
/// (int |grad^j A|^{2i/j} dmu) / (max|A|^{2(i/j-1)} int |grad^i A|^2 dmu).
/// 0/0 reports 0; zero denominator with nonzero numerator reports +inf.
double hamilton_ratio(const Field& phi, int i, int j);

struct ScatteringProfile {
    std::vector<double> times;
    std::vector<Field> psi;            // e^{-i t Delta} phi(t)
    std::vector<std::vector<double>> cauchy_h2; // ||psi_i - psi_j||_{H^2}
    Field phi_plus;                    // last pullback = numerical phi_+
};

/// Pull snapshots back through the free flow and tabulate their H^2 Cauchy
/// differences; needs >= 3 snapshots at increasing times >= 1.
ScatteringProfile scattering_profile(const std::vector<std::pair<double, Field>>& snapshots);

struct EnergyReport {
    std::vector<double> times;           // interior sample times
    std::vector<double> ratio_a;         // (d/dt a_l2_sq) / (a_sup^2 a_l2_sq)
    std::vector<double> ratio_grad_a;    // same for grad_a_l2_sq
    double max_abs_ratio = 0.0;
    double median_abs_ratio = 0.0;
    double first_step_delta_a = 0.0;     // a_l2_sq(t1) - a_l2_sq(t0)
    bool finite = true;
    bool bounded = true;                 // max <= 10 * median (monitored)
};

/// Finite-difference Gronwall-ratio monitor for the curvature energies.
EnergyReport energy_monitor(const std::vector<DiagnosticsRecord>& series);

/// max_t |volume(t) - volume(0)| / volume(0); needs >= 2 records.
double volume_drift(const std::vector<DiagnosticsRecord>& series);

} // namespace smcf
