#include "smcf/cli.hpp"
#include "smcf/config.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <limits>

int main(int argc, char** argv) {
    CLI::App app{"Skew mean curvature flow laboratory for codimension-2 graphs"};
    app.require_subcommand(1);

    std::string config_path;
    std::string series_path;
    std::string column = "w2qprime";
    double t_lo = 1.0;
    double t_hi = std::numeric_limits<double>::infinity();
    std::vector<std::string> snapshot_paths;
    std::string out_path = "phi_plus.snap";
    std::string snapshot_override;

    auto* run = app.add_subcommand("run", "evolve a configured state, write series + snapshots");
    run->add_option("--config", config_path, "config file path")->required();

    auto* fit = app.add_subcommand("decay-fit", "fit a power law to a series column");
    fit->add_option("series", series_path, "series.csv path")->required();
    fit->add_option("--t-lo", t_lo, "window start (>= 1)");
    fit->add_option("--t-hi", t_hi, "window end");
    fit->add_option("--column", column, "series column to fit");

    auto* scatter = app.add_subcommand("scatter", "free-flow pullbacks and H^2 Cauchy table");
    scatter->add_option("snapshots", snapshot_paths, "three or more snapshot files")->required();
    scatter->add_option("--out", out_path, "output path for the phi_plus snapshot");

    auto* check = app.add_subcommand("check-geometry", "geometry identities and oracle checks");
    check->add_option("--config", config_path, "config file path")->required();
    check->add_option("--snapshot", snapshot_override, "check a stored field instead of the configured initial state");

    auto* oracle = app.add_subcommand("oracle-compare", "finite-difference refinement study");
    oracle->add_option("--config", config_path, "config file path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return smcf::cli::cmd_run(smcf::parse_config(config_path));
        if (fit->parsed()) return smcf::cli::cmd_decay_fit(series_path, t_lo, t_hi, column);
        if (scatter->parsed()) return smcf::cli::cmd_scatter(snapshot_paths, out_path);
        if (check->parsed())
            return smcf::cli::cmd_check_geometry(smcf::parse_config(config_path),
                                                 snapshot_override);
        if (oracle->parsed()) return smcf::cli::cmd_oracle_compare(smcf::parse_config(config_path));
    } catch (const smcf::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return smcf::cli::exit_config_error;
    } catch (const smcf::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return smcf::cli::exit_io_error;
    }
    return smcf::cli::exit_config_error;
}
