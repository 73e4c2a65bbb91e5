#pragma once

#include "smcf/dynamics.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace smcf {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Full run description, one [section] per member.  Defaults are listed in
/// the README; unknown keys are rejected.
struct RunConfig {
    struct Grid {
        int d = 0;
        int n = 0;
        double length = 0.0;
    } grid;
    struct Init {
        InitKind kind = InitKind::gaussian_packet;
        double amplitude = 0.01;
        double width = 1.0;
        double modulation = 0.0;
        std::uint64_t seed = 0;
    } init;
    struct Solver {
        RhsKind mode = RhsKind::exact_system;
        double lambda = 0.0;
        double dt_init = 0.01;
        double dt_min = 1e-9;
        double dt_max = 0.05;
        double cfl_safety = 0.5;
        double t_end = 0.0;
    } solver;
    struct Diagnostics {
        double sample_dt = 0.25;
        std::vector<double> snapshot_times;
        double delta = 0.05;
    } diagnostics;
    struct Output {
        std::string dir = ".";
        std::string series_name = "series.csv";
        std::string snapshot_prefix = "snapshot";
    } output;
};

/// Parse the sectioned key-value file at `path`; throws ConfigError naming
/// the offending key path on any unknown, malformed, or out-of-domain entry.
RunConfig parse_config(const std::string& path);

/// Cross-field validation (also run by parse_config).
void validate_config(const RunConfig& cfg);

} // namespace smcf
