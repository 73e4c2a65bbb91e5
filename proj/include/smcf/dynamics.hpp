#pragma once

#include "smcf/geometry.hpp"
#include "smcf/grid.hpp"

#include <cstdint>
#include <string>

namespace smcf {

enum class RhsKind { exact_system, compact_coefficient, linear, regularized };

RhsKind rhs_kind_from_string(const std::string& s);
std::string to_string(RhsKind k);

struct RhsMode {
    RhsKind kind = RhsKind::exact_system;
    double lambda = 0.0; // regularization weight, used only by regularized

    void validate() const;
};

/// Time derivative of phi for the selected formulation.  The nonlinear part
/// of the output is dealiased (2/3 rule); the linear part is untouched.
Field rhs(const Field& phi, const RhsMode& mode);

/// Nonlinear residual N(phi) = rhs(phi) - sigma*Laplacian(phi), dealiased,
/// with sigma = i (or i + lambda for the regularized mode).  This is the term
/// the integrating-factor scheme advances.
Field nonlinear_residual(const Field& phi, const RhsMode& mode);

/// e^{tau * sigma * Laplacian} with sigma as above; direction = -1 applies the
/// reversed-rotation flow's factor e^{-tau * i * Laplacian} (lambda must be 0).
Field linear_propagator(const Field& phi, const RhsMode& mode, double tau, int direction = +1);

/// Un-dealiased graph velocity (dt_u1, dt_u2) for the exact/regularized flow,
/// together with the geometry it was computed from.  The graph moves so that
/// its normal velocity equals (JH + lambda H) . nu_alpha exactly.
struct GraphVelocity {
    Field dtphi; // dt_u1 + i dt_u2, no dealiasing
    GeometryBundle geo;
};

GraphVelocity graph_velocity(const Field& phi, double lambda = 0.0);

/// Max over grid points and alpha of |v . nu_alpha - JH . nu_alpha| with
/// v = (0,...,0, dt_u1, dt_u2) from the exact-system right-hand side.
double normal_velocity_check(const Field& phi);

enum class InitKind { gaussian_packet, sine_bump, random_smooth };

InitKind init_kind_from_string(const std::string& s);

/// Small localized initial perturbations. gaussian_packet:
/// A e^{-|x|^2/(2 w^2)} e^{i m x_1}; sine_bump: real product of sines under a
/// Gaussian envelope; random_smooth: band-limited (|k_j| <= 4) complex noise,
/// rescaled so that the H^4 norm equals the amplitude (deterministic in seed).
Field initial_data(const GridSpec& spec, InitKind kind, double amplitude, double width,
                   double modulation, std::uint64_t seed = 0);

} // namespace smcf
