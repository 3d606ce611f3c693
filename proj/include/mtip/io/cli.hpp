#pragma once

// Command-line front end. Exit codes: 0 success, 1 invalid input, 2 numerical
// or I/O failure (partial outputs removed).

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mtip/experiments/hysteresis.hpp"
#include "mtip/experiments/intermittency.hpp"
#include "mtip/experiments/multistability.hpp"
#include "mtip/experiments/ramp.hpp"
#include "mtip/experiments/tongue.hpp"
#include "mtip/io/config.hpp"
#include "mtip/io/csv.hpp"
#include "mtip/io/manifest.hpp"

namespace mtip::io {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitFailure = 2 };

/// "default" selects the built-in defaults; anything else is a file path.
inline std::string load_config_text(const std::string& spec) {
    if (spec == "default") return "";
    std::ifstream in(spec, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read config file '" + spec + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace detail {

inline json events_json(const std::vector<experiments::DropEvent>& ev) {
    json a = json::array();
    for (const auto& e : ev) a.push_back({{"c", e.c}, {"size", e.size}});
    return a;
}

inline json run_simulate(const RunConfig& cfg, OutputDir& out) {
    const auto& s = cfg.simulate;
    IntegratorConfig ic;
    ic.dt = s.dt;
    ic.t_end = s.t_end;
    ic.seed = cfg.seed;
    ic.substream = 0;
    ic.record_stride = s.record_stride;
    const double c_stop = s.rate == 0.0 ? s.c : s.c_stop;
    auto r = experiments::ramp_run(cfg.model(s.c, s.eps), s.c, c_stop, s.rate, ConstantHistory{s.h0}, ic,
                                   cfg.window, cfg.window / 2);
    write_trajectory(out.file("trajectory.csv"), r.series);
    write_envelope(out.file("envelope.csv"), r.envelope);
    return {{"samples", r.series.size()}, {"windows", r.envelope.size()}, {"t_end", r.series.t_last()}};
}

inline json run_hysteresis(const RunConfig& cfg, OutputDir& out) {
    const auto& h = cfg.hysteresis;
    experiments::HysteresisOptions o;
    o.dt = h.dt;
    o.h0 = h.h0;
    o.settle = h.settle;
    o.window = cfg.window;
    o.stride = cfg.window / 2;
    o.checkpoint_spacing = h.checkpoint_spacing;
    o.locking = cfg.locking();
    o.drops.significance = h.significance;
    o.drops.min_relative = h.min_relative;
    o.master_seed = cfg.seed;
    o.threads = cfg.threads;
    const auto runs = experiments::hysteresis_sweep(cfg.model(h.c_min, h.eps), h.c_min, h.c_max, h.rate,
                                                    h.seeds, o);

    json summary = json::array();
    for (const auto& r : runs) {
        const std::filesystem::path dir =
            runs.size() == 1 ? std::filesystem::path{} : std::filesystem::path("seed_" + std::to_string(r.seed));
        write_sweep(out.file(dir / "sweep_up.csv"), r.up);
        write_sweep(out.file(dir / "sweep_down.csv"), r.down);
        write_events(out.file(dir / "events.csv"), r.up.events);
        write_events(out.file(dir / "events_down.csv"), r.down.events, schema::rises);
        const auto rec = experiments::recovery_event(r.down);
        json js{{"seed", r.seed},
                {"drops", events_json(r.up.events)},
                {"rises", events_json(r.down.events)},
                {"area", experiments::hysteresis_area(r.up, r.down)}};
        js["recovery_c"] = rec ? json(rec->c) : json(nullptr);
        summary.push_back(std::move(js));
    }
    return {{"runs", std::move(summary)}};
}

inline json run_tongue(const RunConfig& cfg, OutputDir& out) {
    const auto& t = cfg.tongue;
    experiments::TongueOptions o;
    o.dt = t.dt;
    o.h0 = t.h0;
    o.settle = t.settle;
    o.window = cfg.window;
    o.locking = cfg.locking();
    o.master_seed = cfg.seed;
    o.threads = cfg.threads;
    const auto map = experiments::tongue_scan(cfg.model(t.c_grid.front(), t.eps), t.c_grid, t.tau_grid, t.rate, o);
    write_tongue(out.file("tongue.csv"), map);

    json rows = json::array();
    std::size_t failed = 0;
    for (const auto& cell : map.cells) failed += !cell.error.empty();
    for (std::size_t r = 0; r < map.tau_grid.size(); ++r) {
        const auto [a, n] = experiments::longest_locked_run(map, r, 2, 7);
        json row{{"tau", map.tau_grid[r]}, {"locked_2_7_cells", n}};
        if (n) row["locked_2_7_c"] = {map.c_grid[a], map.c_grid[a + n - 1]};
        rows.push_back(std::move(row));
    }
    return {{"rows", std::move(rows)}, {"failed_cells", failed}};
}

inline json run_intermittency(const RunConfig& cfg, OutputDir& out) {
    const auto& m = cfg.intermittency;
    experiments::IntermittencyOptions o;
    o.dt = m.dt;
    o.h0 = m.h0;
    o.window = cfg.window;
    o.stride = cfg.window / 2;
    o.record_stride = m.record_stride;
    o.master_seed = cfg.seed;
    o.threads = cfg.threads;
    const auto rs = experiments::intermittency_protocol(cfg.model(m.c, m.eps), m.deltas, m.t_unperturbed,
                                                        m.t_total, m.seeds, o);
    write_residence(out.file("residence.csv"), rs);
    for (std::size_t k = 0; k < rs.size(); ++k) {
        const auto& r = rs[k];
        const std::filesystem::path dir = std::filesystem::path("delta_" + std::to_string(k / m.seeds.size())) /
                                          ("seed_" + std::to_string(r.seed));
        write_envelope(out.file(dir / "envelope.csv"), r.amps);
        if (m.record_stride > 0) write_trajectory(out.file(dir / "trajectory.csv"), r.series);
    }

    json per_delta = json::array();
    for (double d : m.deltas) per_delta.push_back({{"delta_c", d}, {"mean_fraction_lower",
                                                                     experiments::mean_fraction_lower(rs, d)}});
    json thresholds = json::array();
    for (const auto& r : rs)
        thresholds.push_back({{"delta_c", r.delta_c}, {"seed", r.seed}, {"threshold", r.stats.threshold},
                              {"source", experiments::to_string(r.threshold_source)}});
    return {{"deltas", std::move(per_delta)}, {"thresholds", std::move(thresholds)}};
}

inline json run_multistability(const RunConfig& cfg, OutputDir& out) {
    const auto& m = cfg.multistability;
    experiments::MultistabilityOptions o;
    o.dt = m.dt;
    o.h0_min = m.h0_min;
    o.h0_max = m.h0_max;
    o.explore = m.explore;
    o.settle = m.settle;
    o.window = cfg.window;
    o.merge_tol = m.merge_tol;
    o.locking = cfg.locking();
    o.master_seed = cfg.seed;
    o.threads = cfg.threads;
    const auto rep = experiments::multistability_probe(cfg.model(m.c, m.eps), m.c, m.trials, {}, o);
    write_multistability(out.file("multistability.csv"), out.file("multistability_trials.csv"), rep);

    json groups = json::array();
    for (const auto& g : rep.groups)
        groups.push_back({{"class", g.cls.label()}, {"amp", g.amp}, {"basin_count", g.basin_count}});
    return {{"c", rep.c}, {"groups", std::move(groups)}};
}

inline double experiment_dt(const RunConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentKind::Simulate: return cfg.simulate.dt;
        case ExperimentKind::Hysteresis: return cfg.hysteresis.dt;
        case ExperimentKind::Tongue: return cfg.tongue.dt;
        case ExperimentKind::Intermittency: return cfg.intermittency.dt;
        default: return cfg.multistability.dt;
    }
}

}  // namespace detail

/// Runs a validated configuration, writing CSVs and the manifest into
/// cfg.out_dir. Throws on failure after removing everything it wrote.
inline json run_experiment(const RunConfig& cfg) {
    OutputDir out(cfg.out_dir);
    ManifestInfo info;
    info.command = to_string(cfg.kind);
    info.config = cfg;
    info.started = std::chrono::system_clock::now();
    try {
        switch (cfg.kind) {
            case ExperimentKind::Simulate: info.summary = detail::run_simulate(cfg, out); break;
            case ExperimentKind::Hysteresis: info.summary = detail::run_hysteresis(cfg, out); break;
            case ExperimentKind::Tongue: info.summary = detail::run_tongue(cfg, out); break;
            case ExperimentKind::Intermittency: info.summary = detail::run_intermittency(cfg, out); break;
            case ExperimentKind::Multistability: info.summary = detail::run_multistability(cfg, out); break;
        }
        info.tau_eff = cfg.kind == ExperimentKind::Tongue
                           ? effective_tau(cfg.tongue.tau_grid.front(), cfg.tongue.dt)
                           : effective_tau(cfg.tau, detail::experiment_dt(cfg));
        info.finished = std::chrono::system_clock::now();
        write_manifest(out, info);
    } catch (...) {
        out.rollback();
        throw;
    }
    return info.summary;
}

/// Entry point shared by the executable and the tests.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"Forced delay-feedback simulator and experiment runner", "mtip"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    struct Options {
        std::string config = "default";
        std::string out;
        std::uint64_t seed = 0;
        unsigned threads = 0;
    };
    std::vector<std::pair<CLI::App*, ExperimentKind>> subs;
    Options opt;
    const std::pair<const char*, const char*> kinds[] = {
        {"simulate", "integrate one trajectory (constant c or a ramp)"},
        {"hysteresis", "up and down sweeps in c with jump detection"},
        {"tongue", "amplitude and locking map over a (c, tau) grid"},
        {"intermittency", "residence statistics after a step in c"},
        {"multistability", "count coexisting attractors at fixed c"},
    };
    for (std::size_t i = 0; i < std::size(kinds); ++i) {
        auto* sub = app.add_subcommand(kinds[i].first, kinds[i].second);
        sub->add_option("--config", opt.config, "config file, or 'default'");
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--seed", opt.seed, "master RNG seed");
        sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
        subs.emplace_back(sub, static_cast<ExperimentKind>(i));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    CLI::App* chosen = nullptr;
    ExperimentKind kind = ExperimentKind::Simulate;
    for (auto& [sub, k] : subs)
        if (sub->parsed()) {
            chosen = sub;
            kind = k;
        }

    RunConfig cfg;
    try {
        cfg = parse_config(load_config_text(opt.config));
        cfg.kind = kind;
        if (chosen->count("--out")) cfg.out_dir = opt.out;
        if (chosen->count("--seed")) cfg.seed = opt.seed;
        if (chosen->count("--threads")) cfg.threads = opt.threads;
        if (cfg.out_dir.empty()) throw ConfigValidationError("out", "must be nonempty");
    } catch (const InvalidArgument& e) {
        err << "mtip: " << e.what() << "\n";
        return kExitInvalid;
    }

    try {
        const auto summary = run_experiment(cfg);
        out << summary.dump(2) << "\n";
        return kExitOk;
    } catch (const InvalidArgument& e) {
        err << "mtip: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const NonFiniteState& e) {
        err << "mtip: numerical failure: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "mtip: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace mtip::io
