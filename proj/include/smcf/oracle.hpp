#pragma once

#include "smcf/geometry.hpp"
#include "smcf/grid.hpp"

#include <functional>
#include <string>
#include <vector>

namespace smcf::oracle {

/// Reference geometry computed with 4th-order centered finite differences and
/// naive loops; shares no code with the spectral path (stencils instead of
/// transforms, cofactor inversion instead of Woodbury, quadruple-loop
/// contractions).  Same output layout as geometry_bundle.
GeometryBundle fd_geometry(const Field& f);

/// |nabla A|^2_g per point from the FD bundle, all-stencil derivatives.
std::vector<double> fd_nabla_a_normsq(const GeometryBundle& b);

/// Closed-form free-Schroedinger evolution of the Gaussian packet
/// A e^{-|x|^2/(2 w^2)} e^{i m x_1}, evaluated on the grid.
Field free_gaussian_exact(const GridSpec& spec, double amplitude, double width,
                          double modulation, double t);

struct OracleReport {
    std::string quantity;
    std::vector<int> sizes;
    std::vector<double> max_abs_error;
    double order = 0.0; // least-squares slope of log(err) vs log(h); +inf if exact
    bool pass = true;   // order >= 1 (or exact agreement)
};

extern const std::vector<std::string> comparable_quantities;

/// Run spectral and FD geometry on make_field(spec(n)) across resolutions,
/// report max-abs disagreement per size and the fitted convergence order.
OracleReport compare(const std::string& quantity, const std::vector<int>& resolutions, int d,
                     double length, const std::function<Field(const GridSpec&)>& make_field);

/// The default smooth test family for refinement studies.
Field bump_state(const GridSpec& spec);

} // namespace smcf::oracle
