#include "smcf/config.hpp"

#include "smcf/diagnostics.hpp"
#include "smcf/grid.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace smcf {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct KvFile {
    std::map<std::string, std::string> entries; // "section.key" -> value
    std::map<std::string, bool> consumed;

    std::string take(const std::string& path, const std::string& fallback, bool required) {
        auto it = entries.find(path);
        if (it == entries.end()) {
            if (required) throw ConfigError("missing required key " + path);
            return fallback;
        }
        consumed[path] = true;
        return it->second;
    }
};

KvFile load_kv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    KvFile kv;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("malformed section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value at line " + std::to_string(lineno));
        if (section.empty())
            throw ConfigError("key outside any [section] at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string full = section + "." + key;
        if (kv.entries.count(full)) throw ConfigError("duplicate key " + full);
        kv.entries[full] = value;
    }
    return kv;
}

double parse_real(const std::string& path, const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError("key " + path + ": expected a finite real, got '" + s + "'");
    }
}

long long parse_int(const std::string& path, const std::string& s) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError("key " + path + ": expected an integer, got '" + s + "'");
    }
}

std::vector<double> parse_real_list(const std::string& path, const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_real(path, item));
    }
    return out;
}

} // namespace

RunConfig parse_config(const std::string& path) {
    KvFile kv = load_kv(path);
    RunConfig cfg;

    cfg.grid.d = static_cast<int>(parse_int("grid.d", kv.take("grid.d", "", true)));
    cfg.grid.n = static_cast<int>(parse_int("grid.n", kv.take("grid.n", "", true)));
    cfg.grid.length = parse_real("grid.length", kv.take("grid.length", "", true));

    const std::string kind = kv.take("init.kind", "", true);
    try {
        cfg.init.kind = init_kind_from_string(kind);
    } catch (const std::exception&) {
        throw ConfigError("key init.kind: expected one of gaussian_packet|sine_bump|random_smooth, got '" +
                          kind + "'");
    }
    cfg.init.amplitude = parse_real("init.amplitude", kv.take("init.amplitude", "0.01", false));
    cfg.init.width = parse_real("init.width", kv.take("init.width", "1.0", false));
    cfg.init.modulation = parse_real("init.modulation", kv.take("init.modulation", "0.0", false));
    cfg.init.seed =
        static_cast<std::uint64_t>(parse_int("init.seed", kv.take("init.seed", "0", false)));

    const std::string mode = kv.take("solver.mode", "exact_system", false);
    try {
        cfg.solver.mode = rhs_kind_from_string(mode);
    } catch (const std::exception&) {
        throw ConfigError(
            "key solver.mode: expected one of exact_system|compact_coefficient|linear|regularized, got '" +
            mode + "'");
    }
    cfg.solver.lambda = parse_real("solver.lambda", kv.take("solver.lambda", "0.0", false));
    cfg.solver.dt_init = parse_real("solver.dt_init", kv.take("solver.dt_init", "0.01", false));
    cfg.solver.dt_min = parse_real("solver.dt_min", kv.take("solver.dt_min", "1e-9", false));
    cfg.solver.dt_max = parse_real("solver.dt_max", kv.take("solver.dt_max", "0.05", false));
    cfg.solver.cfl_safety =
        parse_real("solver.cfl_safety", kv.take("solver.cfl_safety", "0.5", false));
    cfg.solver.t_end = parse_real("solver.t_end", kv.take("solver.t_end", "", true));

    cfg.diagnostics.sample_dt =
        parse_real("diagnostics.sample_dt", kv.take("diagnostics.sample_dt", "0.25", false));
    cfg.diagnostics.snapshot_times = parse_real_list(
        "diagnostics.snapshot_times", kv.take("diagnostics.snapshot_times", "", false));
    cfg.diagnostics.delta =
        parse_real("diagnostics.delta", kv.take("diagnostics.delta", "0.05", false));

    cfg.output.dir = kv.take("output.dir", ".", false);
    cfg.output.series_name = kv.take("output.series_name", "series.csv", false);
    cfg.output.snapshot_prefix = kv.take("output.snapshot_prefix", "snapshot", false);

    for (const auto& [key, value] : kv.entries)
        if (!kv.consumed.count(key)) throw ConfigError("unknown key " + key);

    validate_config(cfg);
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    try {
        make_grid(cfg.grid.d, cfg.grid.n, cfg.grid.length);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("key grid.*: ") + e.what());
    }
    if (cfg.init.amplitude < 0.0) throw ConfigError("key init.amplitude: must be >= 0");
    if (!(cfg.init.width > 0.0)) throw ConfigError("key init.width: must be positive");
    if (cfg.solver.lambda < 0.0 || cfg.solver.lambda > 1.0)
        throw ConfigError("key solver.lambda: must be in [0, 1]");
    if (cfg.solver.lambda != 0.0 && cfg.solver.mode != RhsKind::regularized)
        throw ConfigError("key solver.lambda: nonzero only with solver.mode = regularized");
    if (!(cfg.solver.dt_min > 0.0)) throw ConfigError("key solver.dt_min: must be positive");
    if (!(cfg.solver.dt_min <= cfg.solver.dt_init && cfg.solver.dt_init <= cfg.solver.dt_max))
        throw ConfigError("key solver.dt_*: need 0 < dt_min <= dt_init <= dt_max");
    if (!(cfg.solver.cfl_safety > 0.0 && cfg.solver.cfl_safety <= 1.0))
        throw ConfigError("key solver.cfl_safety: must be in (0, 1]");
    if (cfg.solver.t_end < 0.0) throw ConfigError("key solver.t_end: must be >= 0");
    if (!(cfg.diagnostics.sample_dt > 0.0))
        throw ConfigError("key diagnostics.sample_dt: must be positive");
    try {
        parameter_plan(cfg.grid.d, cfg.diagnostics.delta);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("key diagnostics.delta: ") + e.what());
    }
    for (double ts : cfg.diagnostics.snapshot_times)
        if (ts < 0.0 || ts > cfg.solver.t_end)
            throw ConfigError("key diagnostics.snapshot_times: times must lie in [0, t_end]");
    if (cfg.output.dir.empty()) throw ConfigError("key output.dir: must not be empty");
    if (cfg.output.series_name.empty())
        throw ConfigError("key output.series_name: must not be empty");
}

} // namespace smcf
