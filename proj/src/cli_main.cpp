#include "snv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "snv/characteristics.hpp"
#include "snv/common.hpp"
#include "snv/config.hpp"
#include "snv/csv.hpp"
#include "snv/diagnostics.hpp"
#include "snv/ensemble.hpp"
#include "snv/presets.hpp"
#include "snv/solver.hpp"
#include "snv/version.hpp"

namespace snv {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliOptions {
    std::string config_path;
    std::string preset;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::string out = ".";
    std::string norm = "scaled";
};

std::string mode_name(SimMode m) {
    switch (m) {
        case SimMode::sNV: return "sNV";
        case SimMode::NV: return "NV";
        case SimMode::NV_expected_velocity: return "NV-expected-velocity";
    }
    return "?";
}

FullConfig load_config(const CliOptions& o) {
    if (!o.config_path.empty() && !o.preset.empty())
        throw config_error("use either --config or --preset, not both");
    FullConfig cfg;
    if (!o.preset.empty()) {
        const char* text = preset_config(o.preset);
        if (!text) {
            std::string names;
            for (const std::string& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
            throw config_error("unknown preset '" + o.preset + "' (available: " + names + ")");
        }
        cfg = parse_config_json(text);
    } else if (!o.config_path.empty()) {
        cfg = parse_config_file(o.config_path);
    } else {
        throw config_error("either --config or --preset is required");
    }
    if (o.seed) cfg.solver.noise.master_seed = *o.seed;
    if (o.threads < 1) throw config_error("--threads must be at least 1");
    return cfg;
}

std::string indexed_name(const std::string& stem, std::size_t idx) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "_%04zu.csv", idx);
    return stem + buf;
}

std::string quantile_label(double p) {
    const double hundred = p * 100.0;
    const long r = std::lround(hundred);
    if (std::abs(hundred - r) < 1e-9 && r >= 0 && r < 100) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "q%02ld", r);
        return buf;
    }
    return "q" + format_double(hundred);
}

json distances_json(const Distances& d) {
    return json{{"l1", d.l1}, {"l2", d.l2}, {"linf", d.linf}};
}

json distance_pair_json(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b, double dx,
                        const std::string& norm) {
    json out = json::object();
    if (norm == "scaled" || norm == "both")
        out["scaled"] = distances_json(distance_metrics_scaled(a, b, dx));
    if (norm == "unscaled" || norm == "both")
        out["unscaled"] = distances_json(distance_metrics_unscaled(a, b));
    return out;
}

/// Shared manifest skeleton; "config" round-trips through the parser, so a manifest
/// is itself a valid --config input.
json manifest_base(const std::string& subcommand, const FullConfig& cfg,
                   const CliOptions& o) {
    json m;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    m["generator"] = kGenerator;
    m["subcommand"] = subcommand;
    m["threads"] = o.threads;
    m["norm"] = o.norm;
    m["config"] = json::parse(emit_config_json(cfg));
    return m;
}

json resolved_block(const FullConfig& cfg, double dt, bool boundary_warning,
                    std::optional<int> n_steps) {
    const KernelWeights w = kernel_weights(cfg.solver.kernel, cfg.solver.grid.dx);
    json r;
    r["dt"] = dt;
    r["delta_r"] = cfg.delta_r_user_set ? cfg.solver.noise.delta_r : dt;
    r["gamma0"] = w.gamma(0);
    r["gamma_sum"] = w.sum();
    r["n_eta"] = w.n_eta;
    r["n_cells"] = cfg.solver.grid.n_cells;
    r["seed"] = cfg.solver.noise.master_seed;
    r["tau"] = cfg.solver.velocity.tau;
    r["mode"] = mode_name(cfg.solver.mode);
    r["boundary_warning"] = boundary_warning;
    if (n_steps) r["n_steps"] = *n_steps;
    return r;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot write output file: " + path.string());
    out << text;
}

void write_manifest(const fs::path& dir, const json& m) {
    write_text(dir / "manifest.json", m.dump(2) + "\n");
}

std::vector<double> cell_centers(const GridSpec& g) {
    std::vector<double> x(static_cast<std::size_t>(g.n_cells));
    for (int j = 0; j < g.n_cells; ++j) x[static_cast<std::size_t>(j)] = g.center(j);
    return x;
}

void warn_boundary(bool flag) {
    if (flag)
        std::cerr << "warning: the solution moved within eta of a window edge; "
                     "results may be contaminated, widen the spatial window\n";
}

// ---------------------------------------------------------------------------
// simulate: one realization, one CSV per recorded output time.
// ---------------------------------------------------------------------------
int cmd_simulate(const FullConfig& cfg, const CliOptions& o, const fs::path& dir) {
    Trajectory traj = simulate(cfg.solver);
    const std::vector<double> x = cell_centers(traj.grid);

    json outputs = json::object();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const std::string name = indexed_name("rho", i);
        std::vector<double> rho(traj.states[i].data(), traj.states[i].data() + traj.grid.n_cells);
        write_csv((dir / name).string(), {"x", "rho"}, {x, rho});
        outputs[name] = json{{"t", traj.times[i]}};
    }

    json m = manifest_base("simulate", cfg, o);
    m["resolved"] = resolved_block(cfg, traj.dt, traj.boundary_warning, traj.n_steps);
    m["outputs"] = outputs;
    write_manifest(dir, m);
    warn_boundary(traj.boundary_warning);
    return 0;
}

// ---------------------------------------------------------------------------
// ensemble: N realizations; per-time statistics CSVs, distances, optional sweep.
// ---------------------------------------------------------------------------
EnsembleConfig to_ensemble_config(const FullConfig& cfg) {
    EnsembleConfig ec;
    ec.base = cfg.solver;
    ec.n_realizations = cfg.ensemble.n;
    ec.quantiles = cfg.ensemble.quantiles;
    ec.reference = cfg.ensemble.reference;
    return ec;
}

void write_ensemble_csv(const fs::path& path, const GridSpec& grid, const EnsembleStats& s,
                        std::size_t t) {
    std::vector<std::string> header{"x", "mean"};
    std::vector<std::vector<double>> cols;
    cols.push_back(cell_centers(grid));
    auto col_of = [&](const Eigen::ArrayXd& a) {
        return std::vector<double>(a.data(), a.data() + a.size());
    };
    cols.push_back(col_of(s.mean[t]));
    if (!s.variance.empty()) {
        header.emplace_back("variance");
        cols.push_back(col_of(s.variance[t]));
    }
    for (std::size_t q = 0; q < s.quantile_ps.size(); ++q) {
        header.push_back(quantile_label(s.quantile_ps[q]));
        cols.push_back(col_of(s.quantile_values[t][q]));
    }
    if (!s.reference.empty()) {
        header.emplace_back("reference");
        cols.push_back(col_of(s.reference[t]));
    }
    write_csv(path.string(), header, cols);
}

json ensemble_distances_json(const EnsembleStats& s, const std::string& norm) {
    json arr = json::array();
    for (std::size_t t = 0; t < s.times.size(); ++t) {
        json entry{{"t", s.times[t]}};
        if (norm == "scaled" || norm == "both") entry["scaled"] = distances_json(s.dist_scaled[t]);
        if (norm == "unscaled" || norm == "both")
            entry["unscaled"] = distances_json(s.dist_unscaled[t]);
        arr.push_back(entry);
    }
    return arr;
}

int cmd_ensemble(const FullConfig& cfg, const CliOptions& o, const fs::path& dir) {
    json m = manifest_base("ensemble", cfg, o);
    json outputs = json::object();
    bool warned = false;

    if (cfg.sweep) {
        if (cfg.ensemble.reference == ReferenceKind::none)
            throw config_error("sweep requires ensemble.reference to be NV or NV-expected-velocity");
        json sweep_log = json::array();
        std::vector<double> vals, l1s, l2s, linfs;
        for (double value : cfg.sweep->values) {
            FullConfig run = cfg;
            if (cfg.sweep->parameter == "tau") {
                run.solver.velocity.tau = value;
                run.solver.noise.tau = value;
            } else {
                run.solver.kernel.eta = value;
            }
            EnsembleStats s = run_ensemble(to_ensemble_config(run), o.threads);
            warned = warned || s.boundary_warning;
            const std::string tag = cfg.sweep->parameter + "-" + format_double(value);
            for (std::size_t t = 0; t < s.times.size(); ++t) {
                const std::string name = indexed_name("ensemble_" + tag, t);
                write_ensemble_csv(dir / name, run.solver.grid, s, t);
                outputs[name] = json{{"t", s.times[t]}, {cfg.sweep->parameter, value}};
            }
            const Distances& last = s.dist_scaled.back();
            vals.push_back(value);
            l1s.push_back(last.l1);
            l2s.push_back(last.l2);
            linfs.push_back(last.linf);
            sweep_log.push_back(json{{"value", value},
                                     {"dt", s.dt},
                                     {"distances", ensemble_distances_json(s, o.norm)}});
        }
        write_csv((dir / "sweep_summary.csv").string(), {"value", "l1", "l2", "linf"},
                  {vals, l1s, l2s, linfs});
        outputs["sweep_summary.csv"] =
            "dx-scaled distances mean-vs-reference at the final output time";
        m["sweep"] = sweep_log;
        const KernelWeights w = kernel_weights(cfg.solver.kernel, cfg.solver.grid.dx);
        m["resolved"] = resolved_block(cfg, cfl_timestep(cfg.solver, w), warned, std::nullopt);
    } else {
        EnsembleStats s = run_ensemble(to_ensemble_config(cfg), o.threads);
        warned = s.boundary_warning;
        for (std::size_t t = 0; t < s.times.size(); ++t) {
            const std::string name = indexed_name("ensemble", t);
            write_ensemble_csv(dir / name, cfg.solver.grid, s, t);
            outputs[name] = json{{"t", s.times[t]}};
        }
        if (!s.reference.empty()) {
            write_text(dir / "distances.json",
                       ensemble_distances_json(s, o.norm).dump(2) + "\n");
            outputs["distances.json"] = "mean vs reference per output time";
        }
        m["resolved"] = resolved_block(cfg, s.dt, warned, std::nullopt);
    }

    m["outputs"] = outputs;
    write_manifest(dir, m);
    warn_boundary(warned);
    return 0;
}

// ---------------------------------------------------------------------------
// characteristics: vehicle paths per realization plus the noise-free reference.
// trace_id = realization * n_starts + start_index; the reference uses start_index.
// ---------------------------------------------------------------------------
int cmd_characteristics(const FullConfig& cfg, const CliOptions& o, const fs::path& dir) {
    const CharacteristicsSpec& ch = cfg.characteristics;
    if (ch.starts.empty())
        throw config_error("characteristics.starts must be non-empty for this subcommand");

    std::vector<TraceStart> starts;
    starts.reserve(ch.starts.size());
    for (double x0 : ch.starts) starts.push_back(TraceStart{ch.t0, x0});

    SimOptions opt;
    opt.record_v_history = true;

    std::vector<double> col_id, col_t, col_x;
    json failed = json::array();
    double worst_inversion = 0.0;
    double dt = 0.0;
    bool warned = false;
    std::optional<int> n_steps;

    auto append = [&](const std::vector<CharacteristicTrace>& traces, double id_base) {
        for (std::size_t s = 0; s < traces.size(); ++s) {
            const CharacteristicTrace& tr = traces[s];
            if (tr.failed) {
                failed.push_back(json{{"trace_id", id_base + static_cast<double>(s)},
                                      {"x0", tr.x0},
                                      {"error", tr.error}});
                continue;
            }
            for (std::size_t k = 0; k < tr.t.size(); ++k) {
                col_id.push_back(id_base + static_cast<double>(s));
                col_t.push_back(tr.t[k]);
                col_x.push_back(tr.x[k]);
            }
        }
    };

    const auto n_starts = static_cast<double>(starts.size());
    for (int i = 0; i < ch.n_realizations; ++i) {
        SolverConfig sc = cfg.solver;
        sc.noise.realization_index = static_cast<std::uint64_t>(i);
        Trajectory traj = simulate(sc, opt);
        if (i == 0) {
            dt = traj.dt;
            n_steps = traj.n_steps;
        }
        warned = warned || traj.boundary_warning;
        std::vector<CharacteristicTrace> traces =
            trace_characteristics(traj, starts, ch.interpolate);
        worst_inversion = std::max(worst_inversion, max_order_inversion(traces));
        append(traces, static_cast<double>(i) * n_starts);
    }
    write_csv((dir / "traces.csv").string(), {"trace_id", "t", "x"}, {col_id, col_t, col_x});

    // Noise-free reference on the identical time mesh, for side-by-side plots.
    SolverConfig ref = cfg.solver;
    ref.mode = SimMode::NV;
    SimOptions ropt = opt;
    ropt.dt_override = dt;
    Trajectory rtraj = simulate(ref, ropt);
    warned = warned || rtraj.boundary_warning;
    col_id.clear();
    col_t.clear();
    col_x.clear();
    append(trace_characteristics(rtraj, starts, ch.interpolate), 0.0);
    write_csv((dir / "traces_reference.csv").string(), {"trace_id", "t", "x"},
              {col_id, col_t, col_x});

    json m = manifest_base("characteristics", cfg, o);
    m["resolved"] = resolved_block(cfg, dt, warned, n_steps);
    m["outputs"] = json{{"traces.csv", "trace_id = realization * n_starts + start_index"},
                        {"traces_reference.csv", "noise-free paths, trace_id = start_index"}};
    m["characteristics"] = json{{"n_starts", starts.size()},
                                {"n_realizations", ch.n_realizations},
                                {"max_order_inversion", worst_inversion},
                                {"failed", failed}};
    write_manifest(dir, m);
    warn_boundary(warned);
    return 0;
}

// ---------------------------------------------------------------------------
// diagnose: run every discrete-invariant check and report machine-readably.
// Exit 2 when any gated check fails or the boundary was contaminated.
// ---------------------------------------------------------------------------
json report_json(const DiagnosticsReport& r, const DiagnosticsThresholds& thr) {
    json j;
    j["max_principle"] = {{"excess", r.max_excess},
                          {"threshold", thr.max_principle},
                          {"pass", r.max_principle_ok}};
    j["mass"] = {{"drift_rel", r.mass_drift}, {"threshold", thr.mass_drift}, {"pass", r.mass_ok}};
    j["tv"] = {{"initial", r.tv_initial},
               {"final", r.tv_final},
               {"bound_noise", r.tv_bound_eps},
               {"bound_noise_free", r.tv_bound_indep},
               {"pass", r.tv_ok}};
    j["tv_space_time"] = {{"value", r.tv_space_time},
                          {"bound", r.tv_space_time_bound},
                          {"pass", r.tv_space_time_ok}};
    j["step_tv"] = {{"worst_ratio", r.step_tv_worst_ratio}, {"pass", r.step_tv_ok}};
    j["entropy"] = {{"worst_residual", r.entropy_worst},
                    {"threshold", thr.entropy},
                    {"c_grid", r.entropy_c_grid},
                    {"pass", r.entropy_ok}};
    j["stability"] = {{"k_eps", r.k_eps},
                      {"k_cap", r.k_cap},
                      {"dv_sup_realized", r.dv_sup_realized},
                      {"pass", r.stability_ok}};
    j["velocity_increment"] = {{"max", r.v_diff_max},
                               {"bound", r.v_diff_bound},
                               {"within", r.v_diff_within},
                               {"informational", true}};
    j["v_envelope_sup"] = r.v_envelope_sup;
    j["boundary_warning"] = r.boundary_warning;
    j["pass"] = r.pass();
    return j;
}

int cmd_diagnose(const FullConfig& cfg, const CliOptions& o, const fs::path& dir) {
    SimOptions opt;
    opt.record_every_step = true;
    opt.record_v_history = true;
    Trajectory traj = simulate(cfg.solver, opt);
    const DiagnosticsThresholds thr;
    DiagnosticsReport report = run_diagnostics(traj, cfg.solver, {}, thr);

    write_text(dir / "diagnostics.json", report_json(report, thr).dump(2) + "\n");
    json m = manifest_base("diagnose", cfg, o);
    m["resolved"] = resolved_block(cfg, traj.dt, traj.boundary_warning, traj.n_steps);
    m["outputs"] = json{{"diagnostics.json", "per-check verdicts"}};
    write_manifest(dir, m);

    std::cout << report.summary();
    warn_boundary(report.boundary_warning);
    return report.pass() ? 0 : 2;
}

// ---------------------------------------------------------------------------
// moments: closed-form mean/variance of the noisy speed across densities.
// ---------------------------------------------------------------------------
int cmd_moments(const FullConfig& cfg, const CliOptions& o, const fs::path& dir) {
    const int n = cfg.moments.points;
    const double rho_max = cfg.solver.velocity.base.rho_max;
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        grid[static_cast<std::size_t>(i)] = rho_max * i / (n - 1);

    std::vector<MomentOverlayRow> rows = moment_overlay(cfg.solver.velocity, grid);
    std::vector<double> rho, v, mean, var, lo, hi;
    for (const MomentOverlayRow& r : rows) {
        rho.push_back(r.rho);
        v.push_back(r.v);
        mean.push_back(r.mean);
        var.push_back(r.variance);
        lo.push_back(r.lo);
        hi.push_back(r.hi);
    }
    write_csv((dir / "moments.csv").string(), {"rho", "v", "mean", "variance", "lo", "hi"},
              {rho, v, mean, var, lo, hi});

    json m = manifest_base("moments", cfg, o);
    const KernelWeights w = kernel_weights(cfg.solver.kernel, cfg.solver.grid.dx);
    m["resolved"] = resolved_block(cfg, cfl_timestep(cfg.solver, w), false, std::nullopt);
    // Densities above rho_star can be stalled by negative noise (the limiter bites).
    m["rho_star"] = limiter_threshold(cfg.solver.velocity);
    m["outputs"] = json{{"moments.csv", "closed-form speed statistics over density"}};
    write_manifest(dir, m);
    return 0;
}

// ---------------------------------------------------------------------------
// compare: sNV ensemble vs both deterministic references on one time grid.
// ---------------------------------------------------------------------------
int cmd_compare(const FullConfig& cfg, const CliOptions& o, const fs::path& dir) {
    EnsembleConfig ec = to_ensemble_config(cfg);
    ec.reference = ReferenceKind::none;
    EnsembleStats s = run_ensemble(ec, o.threads);

    SimOptions opt;
    opt.dt_override = s.dt;
    SolverConfig nv = cfg.solver;
    nv.mode = SimMode::NV;
    Trajectory nv_run = simulate(nv, opt);
    SolverConfig nve = cfg.solver;
    nve.mode = SimMode::NV_expected_velocity;
    Trajectory nve_run = simulate(nve, opt);

    const std::vector<double> x = cell_centers(cfg.solver.grid);
    json outputs = json::object();
    json table = json::array();
    for (std::size_t t = 0; t < s.times.size(); ++t) {
        auto col_of = [](const Eigen::ArrayXd& a) {
            return std::vector<double>(a.data(), a.data() + a.size());
        };
        const std::string name = indexed_name("compare", t);
        write_csv((dir / name).string(), {"x", "mean", "nv", "nv_expected"},
                  {x, col_of(s.mean[t]), col_of(nv_run.states[t]), col_of(nve_run.states[t])});
        outputs[name] = json{{"t", s.times[t]}};

        const double dx = cfg.solver.grid.dx;
        table.push_back(
            json{{"t", s.times[t]},
                 {"mean_vs_nv", distance_pair_json(s.mean[t], nv_run.states[t], dx, o.norm)},
                 {"mean_vs_nv_expected",
                  distance_pair_json(s.mean[t], nve_run.states[t], dx, o.norm)},
                 {"nv_vs_nv_expected",
                  distance_pair_json(nv_run.states[t], nve_run.states[t], dx, o.norm)}});
    }
    write_text(dir / "distances.json", table.dump(2) + "\n");
    outputs["distances.json"] = "three-way distance table per output time";

    const bool warned =
        s.boundary_warning || nv_run.boundary_warning || nve_run.boundary_warning;
    json m = manifest_base("compare", cfg, o);
    m["resolved"] = resolved_block(cfg, s.dt, warned, std::nullopt);
    m["outputs"] = outputs;
    write_manifest(dir, m);
    warn_boundary(warned);
    return 0;
}

void add_common_options(CLI::App* sub, CliOptions& o) {
    sub->add_option("--config", o.config_path, "Path to a JSON config (or a run manifest)")
        ->envname("SNV_CONFIG");
    sub->add_option("--preset", o.preset, "Bundled preset name (see `snv list-presets`)")
        ->envname("SNV_PRESET");
    sub->add_option("--seed", o.seed, "Override noise.seed")->envname("SNV_SEED");
    sub->add_option("--threads", o.threads, "Worker threads for ensembles (default 1)")
        ->envname("SNV_THREADS");
    sub->add_option("--out", o.out, "Output directory (created if missing; default .)")
        ->envname("SNV_OUT");
    sub->add_option("--norm", o.norm, "Distance scaling: scaled, unscaled, or both")
        ->envname("SNV_NORM")
        ->check(CLI::IsMember({"scaled", "unscaled", "both"}));
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{std::string(kToolName) +
                 " - stochastic nonlocal traffic-flow solver.\n"
                 "Options can also be set via SNV_-prefixed environment variables\n"
                 "(SNV_CONFIG, SNV_PRESET, SNV_SEED, SNV_THREADS, SNV_OUT, SNV_NORM).\n"
                 "Exit codes: 0 success, 1 usage/config error, 2 invariant or diagnostic failure."};
    app.require_subcommand(1);
    CliOptions o;

    CLI::App* sim = app.add_subcommand("simulate", "One realization; density CSV per output time");
    CLI::App* ens = app.add_subcommand("ensemble",
                                       "N realizations; per-cell statistics and distances");
    CLI::App* chr = app.add_subcommand("characteristics", "Vehicle paths through the velocity field");
    CLI::App* dgn = app.add_subcommand("diagnose", "Run every discrete-invariant check");
    CLI::App* mom = app.add_subcommand("moments", "Closed-form speed statistics over density");
    CLI::App* cmp = app.add_subcommand("compare",
                                       "Ensemble mean vs NV and NV-expected-velocity references");
    CLI::App* lst = app.add_subcommand("list-presets", "Print bundled preset names");
    for (CLI::App* sub : {sim, ens, chr, dgn, mom, cmp}) add_common_options(sub, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (lst->parsed()) {
        for (const std::string& n : preset_names()) std::cout << n << "\n";
        return 0;
    }

    try {
        FullConfig cfg = load_config(o);
        fs::path dir(o.out);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw config_error("cannot create output directory: " + dir.string());

        if (sim->parsed()) return cmd_simulate(cfg, o, dir);
        if (ens->parsed()) return cmd_ensemble(cfg, o, dir);
        if (chr->parsed()) return cmd_characteristics(cfg, o, dir);
        if (dgn->parsed()) return cmd_diagnose(cfg, o, dir);
        if (mom->parsed()) return cmd_moments(cfg, o, dir);
        if (cmp->parsed()) return cmd_compare(cfg, o, dir);
        std::cerr << "error: no subcommand selected\n";
        return 1;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const invariant_error& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 2;
    }
}

} // namespace snv
