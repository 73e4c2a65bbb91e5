#pragma once

#include "smcf/config.hpp"

#include <string>
#include <vector>

namespace smcf::cli {

// stable exit-code contract
inline constexpr int exit_ok = 0;
inline constexpr int exit_blown_up = 2;
inline constexpr int exit_config_error = 3;
inline constexpr int exit_io_error = 4;
inline constexpr int exit_check_failure = 5;

/// Evolve the configured state, writing series.csv and snapshots under the
/// output directory (SMCF_OUTPUT_DIR overrides output.dir).
int cmd_run(const RunConfig& cfg);

/// Fit log(column) vs log(t) on a series file; prints
/// "slope=<v> stderr=<v> n=<count>".
int cmd_decay_fit(const std::string& series_path, double t_lo, double t_hi,
                  const std::string& column);

/// Pull snapshots back through the free flow, print the H^2 Cauchy table,
/// and write the phi_plus estimate snapshot.
int cmd_scatter(const std::vector<std::string>& snapshot_paths, const std::string& out_path);

/// Run the pointwise curvature-equivalence check, frame invariants, and
/// oracle comparisons on the configured initial state (or a snapshot).
int cmd_check_geometry(const RunConfig& cfg, const std::string& snapshot_path = "");

/// Oracle refinement study on the configured initial-data family.
int cmd_oracle_compare(const RunConfig& cfg);

} // namespace smcf::cli
