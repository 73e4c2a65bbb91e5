#include "smcf/cli.hpp"

#include "smcf/diagnostics.hpp"
#include "smcf/dynamics.hpp"
#include "smcf/integrator.hpp"
#include "smcf/oracle.hpp"
#include "smcf/series.hpp"
#include "smcf/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>

namespace smcf::cli {

namespace {

namespace fs = std::filesystem;

std::string output_dir(const RunConfig& cfg) {
    if (const char* env = std::getenv("SMCF_OUTPUT_DIR"); env && *env) return env;
    return cfg.output.dir;
}

std::string snapshot_path(const std::string& dir, const std::string& prefix, double t) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_t%.6g.snap", prefix.c_str(), t);
    return (fs::path(dir) / buf).string();
}

struct CheckPrinter {
    bool all_pass = true;
    void line(const std::string& name, bool pass, double value, double tol) {
        std::printf("%s %s value=%.6g tol=%.6g\n", pass ? "PASS" : "FAIL", name.c_str(), value,
                    tol);
        all_pass = all_pass && pass;
    }
    void line(const std::string& name, bool pass, const std::string& detail) {
        std::printf("%s %s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
        all_pass = all_pass && pass;
    }
};

} // namespace

int cmd_run(const RunConfig& cfg) {
    try {
        validate_config(cfg);
        const std::string dir = output_dir(cfg);
        fs::create_directories(dir);
        const std::string series_path = (fs::path(dir) / cfg.output.series_name).string();
        SeriesWriter writer(series_path);

        RunSinks sinks;
        sinks.on_record = [&](const DiagnosticsRecord& r) { writer.append(r); };
        sinks.on_snapshot = [&](double t, const Field& f) {
            write_snapshot(snapshot_path(dir, cfg.output.snapshot_prefix, t), f, t);
        };

        RunResult res = run(cfg, sinks);
        std::printf("status=%s t=%.6g steps=%ld\n", to_string(res.final_state.status).c_str(),
                    res.final_state.t, res.final_state.step_count);
        if (!res.final_state.message.empty())
            std::printf("detail: %s\n", res.final_state.message.c_str());
        switch (res.final_state.status) {
        case RunStatus::finished: return exit_ok;
        case RunStatus::blown_up: return exit_blown_up;
        default: return exit_config_error;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config_error;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return exit_io_error;
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return exit_io_error;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_config_error;
    }
}

int cmd_decay_fit(const std::string& series_path, double t_lo, double t_hi,
                  const std::string& column) {
    try {
        auto series = read_series(series_path);
        DecayFit fit = fit_decay_exponent(series, t_lo, t_hi, column);
        std::printf("slope=%.12g stderr=%.12g n=%d\n", fit.slope, fit.stderr_slope, fit.count);
        return exit_ok;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return exit_io_error;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "decay-fit error: %s\n", e.what());
        return exit_config_error;
    }
}

int cmd_scatter(const std::vector<std::string>& snapshot_paths, const std::string& out_path) {
    try {
        std::vector<std::pair<double, Field>> snaps;
        for (const std::string& p : snapshot_paths) {
            auto [f, t] = read_snapshot(p);
            snaps.emplace_back(t, std::move(f));
        }
        ScatteringProfile prof = scattering_profile(snaps);
        for (std::size_t i = 0; i < prof.times.size(); ++i)
            for (std::size_t j = i + 1; j < prof.times.size(); ++j)
                std::printf("cauchy t1=%.6g t2=%.6g h2=%.12g\n", prof.times[i], prof.times[j],
                            prof.cauchy_h2[i][j]);
        write_snapshot(out_path, prof.phi_plus, prof.times.back());
        std::printf("phi_plus=%s\n", out_path.c_str());
        return exit_ok;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return exit_io_error;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "scatter error: %s\n", e.what());
        return exit_config_error;
    }
}

int cmd_check_geometry(const RunConfig& cfg, const std::string& snapshot_override) {
    try {
        validate_config(cfg);
        Field phi;
        bool from_snapshot = !snapshot_override.empty();
        if (from_snapshot) {
            phi = read_snapshot(snapshot_override).first;
        } else {
            const GridSpec spec = make_grid(cfg.grid.d, cfg.grid.n, cfg.grid.length);
            phi = initial_data(spec, cfg.init.kind, cfg.init.amplitude, cfg.init.width,
                               cfg.init.modulation, cfg.init.seed);
        }

        CheckPrinter out;
        if (!phi.finite()) {
            out.line("field_finite", false, "non-finite samples in state");
            return exit_check_failure;
        }
        out.line("field_finite", true, "all samples finite");

        out.line("curvature_equivalence", check_curvature_equivalence(phi) <= 1e-9, check_curvature_equivalence(phi), 1e-9);

        GeometryBundle b = geometry_bundle(phi, false);
        const int d = phi.spec.d;
        const std::size_t N = phi.spec.point_count();
        double frame_resid = 0.0, tangency = 0.0, iso = 0.0, mixed = 0.0, htan = 0.0;
        double metric_resid = 0.0;
        for (std::size_t p = 0; p < N; ++p) {
            const double* nu1 = &b.frame.nu1[p * (d + 2)];
            const double* nu2 = &b.frame.nu2[p * (d + 2)];
            double n11 = 0.0, n22 = 0.0, n12 = 0.0;
            for (int c = 0; c < d + 2; ++c) {
                n11 += nu1[c] * nu1[c];
                n22 += nu2[c] * nu2[c];
                n12 += nu1[c] * nu2[c];
            }
            frame_resid = std::max({frame_resid, std::abs(n11 - 1.0), std::abs(n22 - 1.0),
                                    std::abs(n12)});
            const double* H = &b.curv.H[p * (d + 2)];
            const double* JH = &b.curv.JH[p * (d + 2)];
            double hh = 0.0, jj = 0.0, hj = 0.0;
            for (int c = 0; c < d + 2; ++c) {
                hh += H[c] * H[c];
                jj += JH[c] * JH[c];
                hj += H[c] * JH[c];
            }
            iso = std::max(iso, std::abs(jj - hh) / (1.0 + hh));
            mixed = std::max(mixed, std::abs(hj) / (1.0 + hh));
            for (int i = 0; i < d; ++i) {
                const double* du = &b.der.du[(p * d + i) * 2];
                double t1 = nu1[i] + du[0] * nu1[d] + du[1] * nu1[d + 1];
                double t2 = nu2[i] + du[0] * nu2[d] + du[1] * nu2[d + 1];
                tangency = std::max({tangency, std::abs(t1), std::abs(t2)});
                const double ht = H[i] + du[0] * H[d] + du[1] * H[d + 1];
                htan = std::max(htan, std::abs(ht) / (1.0 + std::sqrt(hh)));
            }
            const double* g = &b.metric.g[p * d * d];
            const double* gi = &b.metric.ginv[p * d * d];
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double acc = 0.0;
                    for (int m = 0; m < d; ++m) acc += g[i * d + m] * gi[m * d + j];
                    metric_resid = std::max(metric_resid, std::abs(acc - (i == j ? 1.0 : 0.0)));
                }
        }
        out.line("frame_orthonormality", frame_resid <= 1e-10, frame_resid, 1e-10);
        out.line("frame_tangency", tangency <= 1e-10, tangency, 1e-10);
        out.line("J_isometry", iso <= 1e-10 && mixed <= 1e-10, std::max(iso, mixed), 1e-10);
        out.line("H_normal", htan <= 1e-9, htan, 1e-9);
        out.line("metric_inverse", metric_resid <= 1e-10, metric_resid, 1e-10);

        double max_jh = 0.0;
        for (std::size_t p = 0; p < N; ++p) {
            double jj = 0.0;
            for (int c = 0; c < d + 2; ++c) {
                const double v = b.curv.JH[p * (d + 2) + c];
                jj += v * v;
            }
            max_jh = std::max(max_jh, std::sqrt(jj));
        }
        const double nv = normal_velocity_check(phi);
        const double nv_tol = 1e-8 * std::max(max_jh, 1e-300);
        out.line("normal_velocity", max_jh == 0.0 ? nv == 0.0 : nv <= nv_tol, nv, nv_tol);

        if (!from_snapshot) {
            const int base = std::max(cfg.grid.n, 128);
            std::vector<int> rs = {base / 4, base / 2, base};
            auto family = [&](const GridSpec& spec) {
                return initial_data(spec, cfg.init.kind, cfg.init.amplitude, cfg.init.width,
                                    cfg.init.modulation, cfg.init.seed);
            };
            for (const std::string& q : oracle::comparable_quantities) {
                oracle::OracleReport rep =
                    oracle::compare(q, rs, cfg.grid.d, cfg.grid.length, family);
                const bool pass = std::isinf(rep.order) || rep.order >= 3.5;
                char detail[128];
                std::snprintf(detail, sizeof(detail), "order=%.3g err(n=%d)=%.3g",
                              rep.order, rep.sizes.back(), rep.max_abs_error.back());
                out.line("oracle_" + q, pass, detail);
            }
        }

        return out.all_pass ? exit_ok : exit_check_failure;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config_error;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return exit_io_error;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "check-geometry error: %s\n", e.what());
        return exit_check_failure;
    }
}

int cmd_oracle_compare(const RunConfig& cfg) {
    try {
        validate_config(cfg);
        const int base = std::max(cfg.grid.n, 128);
        std::vector<int> rs = {base / 4, base / 2, base};
        auto family = [&](const GridSpec& spec) {
            return initial_data(spec, cfg.init.kind, cfg.init.amplitude, cfg.init.width,
                                cfg.init.modulation, cfg.init.seed);
        };
        bool all_pass = true;
        for (const std::string& q : oracle::comparable_quantities) {
            oracle::OracleReport rep = oracle::compare(q, rs, cfg.grid.d, cfg.grid.length, family);
            const bool pass = std::isinf(rep.order) || rep.order >= 3.5;
            all_pass = all_pass && pass;
            std::printf("%s %-24s order=%-8.3g errors=", pass ? "PASS" : "FAIL", q.c_str(),
                        rep.order);
            for (std::size_t i = 0; i < rep.max_abs_error.size(); ++i)
                std::printf("%s%.3g", i ? "," : "", rep.max_abs_error[i]);
            std::printf("\n");
        }
        return all_pass ? exit_ok : exit_check_failure;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config_error;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "oracle-compare error: %s\n", e.what());
        return exit_check_failure;
    }
}

} // namespace smcf::cli
