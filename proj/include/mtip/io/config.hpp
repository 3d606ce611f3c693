#pragma once

// Run configuration: a JSON document (comments allowed) resolved into fully
// explicit settings for every experiment. Section values override top-level
// ones, which override the section's own defaults.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtip/core/errors.hpp"
#include "mtip/core/integrator.hpp"
#include "mtip/experiments/hysteresis.hpp"
#include "mtip/observables/amplitude.hpp"
#include "mtip/observables/locking.hpp"

namespace mtip::io {

using json = nlohmann::ordered_json;

class ConfigSyntaxError : public InvalidArgument {
public:
    ConfigSyntaxError(std::size_t line, std::size_t column, const std::string& what)
        : InvalidArgument("config syntax error at line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ": " + what),
          line_(line), column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_, column_;
};

class ConfigValidationError : public InvalidArgument {
public:
    ConfigValidationError(std::string key, const std::string& constraint)
        : InvalidArgument("invalid config key '" + key + "': " + constraint), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

enum class ExperimentKind { Simulate, Hysteresis, Tongue, Intermittency, Multistability };

inline const char* to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Simulate: return "simulate";
        case ExperimentKind::Hysteresis: return "hysteresis";
        case ExperimentKind::Tongue: return "tongue";
        case ExperimentKind::Intermittency: return "intermittency";
        default: return "multistability";
    }
}

struct SimulateConfig {
    double c = 2.966;
    double eps = 0.0;
    double dt = 1e-3;
    double h0 = 1.0;
    double t_end = 1000.0;
    /// Ramp towards c_stop at `rate` when rate != 0; t_end then follows from the ramp.
    double rate = 0.0;
    double c_stop = 2.966;
    std::int64_t record_stride = 10;
};

struct HysteresisConfig {
    double eps = 0.0005;
    double dt = 1e-3;
    double c_min = 2.86;
    double c_max = 3.08;
    double rate = 1e-6;
    double h0 = 1.0;
    double settle = 2000.0;
    double checkpoint_spacing = 500.0;
    double significance = 5.0;
    double min_relative = experiments::kSweepMinRelative;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
};

struct TongueConfig {
    double eps = 0.0;
    double dt = 1e-3;
    std::vector<double> c_grid;
    std::vector<double> tau_grid{0.953};
    double rate = 1e-6;
    double h0 = 1.0;
    double settle = 2000.0;
};

struct IntermittencyConfig {
    double c = 2.966;
    double eps = 0.001;
    double dt = 2.5e-4;
    std::vector<double> deltas{0.003, 0.0045, 0.006};
    double t_unperturbed = 1.5e4;
    double t_total = 2.5e4;
    double h0 = 1.0;
    std::int64_t record_stride = 0;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
};

struct MultistabilityConfig {
    double c = 2.9725;
    double eps = 0.0005;
    double dt = 1e-3;
    std::size_t trials = 30;
    double h0_min = -0.2;
    double h0_max = 0.2;
    double explore = 1e4;
    double settle = 2000.0;
    double merge_tol = 0.03;
};

struct RunConfig {
    ExperimentKind kind = ExperimentKind::Simulate;
    std::string out_dir = "out";
    double kappa = 11.0;
    double tau = 0.953;
    double window = kDefaultWindow;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    int q_max = 40;
    double lock_tol = 1e-3;
    SimulateConfig simulate;
    HysteresisConfig hysteresis;
    TongueConfig tongue;
    IntermittencyConfig intermittency;
    MultistabilityConfig multistability;

    ModelParams model(double c, double eps) const { return ModelParams{kappa, tau, c, eps}; }
    LockingOptions locking() const {
        LockingOptions o;
        o.q_max = q_max;
        o.tol = lock_tol;
        return o;
    }
};

inline std::vector<double> default_tongue_c_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 80; ++i) g.push_back(2.95 + 0.0005 * i);
    return g;
}

namespace detail {

/// Consumes keys of one JSON object and rejects whatever is left over.
class Section {
public:
    Section(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
        if (!obj_.is_object()) throw ConfigValidationError(name(""), "must be an object");
    }

    std::string name(const std::string& key) const {
        if (prefix_.empty()) return key;
        return key.empty() ? prefix_ : prefix_ + "." + key;
    }

    const json* find(const std::string& key) {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    bool number(const std::string& key, double& out) {
        const json* v = find(key);
        if (!v) return false;
        if (!v->is_number()) throw ConfigValidationError(name(key), "must be a number");
        out = v->get<double>();
        if (!std::isfinite(out)) throw ConfigValidationError(name(key), "must be finite");
        return true;
    }

    template <class UInt>
    bool unsigned_int(const std::string& key, UInt& out) {
        const json* v = find(key);
        if (!v) return false;
        if (!v->is_number_unsigned())
            throw ConfigValidationError(name(key), "must be a non-negative integer");
        const auto u = v->get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(std::numeric_limits<UInt>::max()))
            throw ConfigValidationError(name(key), "is out of range");
        out = static_cast<UInt>(u);
        return true;
    }

    bool string(const std::string& key, std::string& out) {
        const json* v = find(key);
        if (!v) return false;
        if (!v->is_string()) throw ConfigValidationError(name(key), "must be a string");
        out = v->get<std::string>();
        return true;
    }

    bool numbers(const std::string& key, std::vector<double>& out) {
        const json* v = find(key);
        if (!v) return false;
        out = number_list(*v, name(key));
        return true;
    }

    bool seeds(const std::string& key, std::vector<std::uint64_t>& out) {
        const json* v = find(key);
        if (!v) return false;
        if (!v->is_array()) throw ConfigValidationError(name(key), "must be an array of integers");
        out.clear();
        for (const auto& e : *v) {
            if (!e.is_number_unsigned())
                throw ConfigValidationError(name(key), "entries must be non-negative integers");
            out.push_back(e.get<std::uint64_t>());
        }
        return true;
    }

    void reject_unknown() const {
        for (const auto& [k, v] : obj_.items())
            if (!seen_.count(k)) throw ConfigValidationError(name(k), "unknown key");
    }

    /// Array of numbers, or {"start", "stop", "num"} with num >= 1 evenly spaced points.
    static std::vector<double> number_list(const json& v, const std::string& key) {
        std::vector<double> out;
        if (v.is_array()) {
            for (const auto& e : v) {
                if (!e.is_number()) throw ConfigValidationError(key, "entries must be numbers");
                out.push_back(e.get<double>());
            }
            return out;
        }
        if (!v.is_object()) throw ConfigValidationError(key, "must be an array or {start, stop, num}");
        Section s(v, key);
        double start = 0.0, stop = 0.0;
        std::size_t num = 0;
        if (!s.number("start", start) || !s.number("stop", stop) || !s.unsigned_int("num", num))
            throw ConfigValidationError(key, "range needs start, stop and num");
        s.reject_unknown();
        if (num == 0) throw ConfigValidationError(key + ".num", "must be >= 1");
        for (std::size_t i = 0; i < num; ++i)
            out.push_back(num == 1 ? start
                                   : start + (stop - start) * static_cast<double>(i) /
                                                 static_cast<double>(num - 1));
        return out;
    }

private:
    const json& obj_;
    std::string prefix_;
    std::set<std::string> seen_;
};

inline void require(bool ok, const std::string& key, const std::string& constraint) {
    if (!ok) throw ConfigValidationError(key, constraint);
}

inline void require_increasing(const std::vector<double>& g, const std::string& key) {
    require(!g.empty(), key, "must be nonempty");
    for (std::size_t i = 1; i < g.size(); ++i) require(g[i] > g[i - 1], key, "must be strictly increasing");
}

/// Delay must be a whole number of steps; reported under the dt key.
inline void require_delay(double tau, double dt, const std::string& dt_key) {
    require(dt > 0.0, dt_key, "must be > 0");
    try {
        mtip::detail::delay_steps(tau, dt);
    } catch (const InvalidDelay& e) {
        throw ConfigValidationError(dt_key, e.what());
    }
}

}  // namespace detail

/// Parses and validates a document; whitespace-only text yields the defaults.
inline RunConfig parse_config(const std::string& text) {
    json doc = json::object();
    if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
        try {
            doc = json::parse(text, nullptr, true, true);
        } catch (const json::parse_error& e) {
            std::size_t line = 1, col = 1;
            const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
            for (std::size_t i = 0; i < end; ++i) {
                if (text[i] == '\n') {
                    ++line;
                    col = 1;
                } else {
                    ++col;
                }
            }
            std::string msg = e.what();
            if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
            throw ConfigSyntaxError(line, col, msg);
        }
    }
    if (!doc.is_object()) throw ConfigSyntaxError(1, 1, "top level must be an object");

    using detail::require;
    RunConfig cfg;
    detail::Section top(doc, "");
    top.string("out", cfg.out_dir);
    top.number("kappa", cfg.kappa);
    const bool tau_given = top.number("tau", cfg.tau);
    top.number("window", cfg.window);
    top.unsigned_int("seed", cfg.seed);
    top.unsigned_int("threads", cfg.threads);
    top.unsigned_int("q_max", cfg.q_max);
    top.number("lock_tol", cfg.lock_tol);
    double v = 0.0;
    std::optional<double> c, eps, dt;
    if (top.number("c", v)) c = v;
    if (top.number("eps", v)) eps = v;
    if (top.number("dt", v)) dt = v;
    if (c) detail::require(*c >= 0.0, "c", "must be >= 0");
    if (eps) detail::require(*eps >= 0.0, "eps", "must be >= 0");
    if (dt) detail::require_delay(cfg.tau, *dt, "dt");

    auto shared = [&](detail::Section& s, double* c_field, double& eps_field, double& dt_field) {
        if (c_field && c) *c_field = *c;
        if (eps) eps_field = *eps;
        if (dt) dt_field = *dt;
        if (c_field) s.number("c", *c_field);
        s.number("eps", eps_field);
        s.number("dt", dt_field);
    };
    auto section = [&](const char* key, auto&& fill) {
        static const json empty = json::object();
        const json* node = top.find(key);
        detail::Section s(node ? *node : empty, key);
        fill(s);
        s.reject_unknown();
    };

    section("simulate", [&](detail::Section& s) {
        auto& x = cfg.simulate;
        shared(s, &x.c, x.eps, x.dt);
        x.c_stop = x.c;
        s.number("h0", x.h0);
        s.number("t_end", x.t_end);
        s.number("rate", x.rate);
        s.number("c_stop", x.c_stop);
        s.unsigned_int("record_stride", x.record_stride);
    });
    section("hysteresis", [&](detail::Section& s) {
        auto& x = cfg.hysteresis;
        shared(s, nullptr, x.eps, x.dt);
        s.number("c_min", x.c_min);
        s.number("c_max", x.c_max);
        s.number("rate", x.rate);
        s.number("h0", x.h0);
        s.number("settle", x.settle);
        s.number("checkpoint_spacing", x.checkpoint_spacing);
        s.number("significance", x.significance);
        s.number("min_relative", x.min_relative);
        s.seeds("seeds", x.seeds);
    });
    section("tongue", [&](detail::Section& s) {
        auto& x = cfg.tongue;
        shared(s, nullptr, x.eps, x.dt);
        x.c_grid = default_tongue_c_grid();
        if (tau_given) x.tau_grid = {cfg.tau};
        s.numbers("c_grid", x.c_grid);
        s.numbers("tau_grid", x.tau_grid);
        s.number("rate", x.rate);
        s.number("h0", x.h0);
        s.number("settle", x.settle);
    });
    section("intermittency", [&](detail::Section& s) {
        auto& x = cfg.intermittency;
        shared(s, &x.c, x.eps, x.dt);
        s.numbers("deltas", x.deltas);
        s.number("t_unperturbed", x.t_unperturbed);
        s.number("t_total", x.t_total);
        s.number("h0", x.h0);
        s.unsigned_int("record_stride", x.record_stride);
        s.seeds("seeds", x.seeds);
    });
    section("multistability", [&](detail::Section& s) {
        auto& x = cfg.multistability;
        shared(s, &x.c, x.eps, x.dt);
        s.unsigned_int("trials", x.trials);
        std::vector<double> range;
        if (s.numbers("h0_range", range)) {
            require(range.size() == 2, "multistability.h0_range", "must hold exactly two numbers");
            x.h0_min = range[0];
            x.h0_max = range[1];
        }
        s.number("explore", x.explore);
        s.number("settle", x.settle);
        s.number("merge_tol", x.merge_tol);
    });
    top.reject_unknown();

    require(cfg.kappa > 0.0, "kappa", "must be > 0");
    require(cfg.tau > 0.0, "tau", "must be > 0");
    require(cfg.window > 0.0, "window", "must be > 0");
    require(cfg.threads >= 1, "threads", "must be >= 1");
    require(cfg.q_max >= 2, "q_max", "must be >= 2");
    require(cfg.lock_tol > 0.0, "lock_tol", "must be > 0");
    require(!cfg.out_dir.empty(), "out", "must be nonempty");

    auto model_checks = [&](const std::string& sec, double c_val, double eps_val, double dt_val,
                            double tau) {
        require(c_val >= 0.0, sec + ".c", "must be >= 0");
        require(eps_val >= 0.0, sec + ".eps", "must be >= 0");
        detail::require_delay(tau, dt_val, sec + ".dt");
    };

    {
        const auto& x = cfg.simulate;
        model_checks("simulate", x.c, x.eps, x.dt, cfg.tau);
        require(x.record_stride >= 1, "simulate.record_stride", "must be >= 1");
        require(x.c_stop >= 0.0, "simulate.c_stop", "must be >= 0");
        if (x.rate == 0.0) {
            require(x.t_end > 0.0, "simulate.t_end", "must be > 0");
        } else {
            require(x.rate > 0.0 ? x.c_stop > x.c : x.c_stop < x.c, "simulate.c_stop",
                    "must lie beyond c in the direction of rate");
        }
    }
    {
        const auto& x = cfg.hysteresis;
        require(x.c_min >= 0.0, "hysteresis.c_min", "must be >= 0");
        model_checks("hysteresis", x.c_min, x.eps, x.dt, cfg.tau);
        require(x.c_max > x.c_min, "hysteresis.c_max", "must be > c_min");
        require(x.rate > 0.0, "hysteresis.rate", "must be > 0");
        require(x.settle >= 0.0, "hysteresis.settle", "must be >= 0");
        require(x.checkpoint_spacing > 0.0, "hysteresis.checkpoint_spacing", "must be > 0");
        require(x.significance > 0.0, "hysteresis.significance", "must be > 0");
        require(x.min_relative >= 0.0, "hysteresis.min_relative", "must be >= 0");
        require(!x.seeds.empty(), "hysteresis.seeds", "must be nonempty");
    }
    {
        const auto& x = cfg.tongue;
        require(x.eps >= 0.0, "tongue.eps", "must be >= 0");
        detail::require_increasing(x.c_grid, "tongue.c_grid");
        detail::require_increasing(x.tau_grid, "tongue.tau_grid");
        require(x.c_grid.front() >= 0.0, "tongue.c_grid", "values must be >= 0");
        for (double tau : x.tau_grid) {
            require(tau > 0.0, "tongue.tau_grid", "values must be > 0");
            detail::require_delay(tau, x.dt, "tongue.dt");
        }
        require(x.rate >= 0.0, "tongue.rate", "must be >= 0");
        require(x.settle >= cfg.window, "tongue.settle", "must be >= window");
    }
    {
        const auto& x = cfg.intermittency;
        model_checks("intermittency", x.c, x.eps, x.dt, cfg.tau);
        require(!x.deltas.empty(), "intermittency.deltas", "must be nonempty");
        for (double d : x.deltas) require(x.c + d >= 0.0, "intermittency.deltas", "c + delta must be >= 0");
        require(x.t_unperturbed >= 0.0, "intermittency.t_unperturbed", "must be >= 0");
        require(x.t_total > x.t_unperturbed, "intermittency.t_total", "must be > t_unperturbed");
        require(x.t_total - x.t_unperturbed >= cfg.window, "intermittency.t_total",
                "post-perturbation segment must cover one window");
        require(!x.seeds.empty(), "intermittency.seeds", "must be nonempty");
    }
    {
        const auto& x = cfg.multistability;
        model_checks("multistability", x.c, x.eps, x.dt, cfg.tau);
        require(x.trials >= 10, "multistability.trials", "must be >= 10");
        require(x.h0_min <= x.h0_max, "multistability.h0_range", "must be ordered");
        require(x.explore >= 0.0, "multistability.explore", "must be >= 0");
        require(x.settle >= 0.0, "multistability.settle", "must be >= 0");
        require(x.merge_tol >= 0.0, "multistability.merge_tol", "must be >= 0");
    }
    return cfg;
}

/// Fully resolved document; parse_config(to_json(c)) reproduces c.
inline json to_json(const RunConfig& c) {
    json j;
    j["out"] = c.out_dir;
    j["kappa"] = c.kappa;
    j["tau"] = c.tau;
    j["window"] = c.window;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["q_max"] = c.q_max;
    j["lock_tol"] = c.lock_tol;
    const auto& s = c.simulate;
    j["simulate"] = {{"c", s.c}, {"eps", s.eps}, {"dt", s.dt}, {"h0", s.h0}, {"t_end", s.t_end},
                     {"rate", s.rate}, {"c_stop", s.c_stop}, {"record_stride", s.record_stride}};
    const auto& h = c.hysteresis;
    j["hysteresis"] = {{"eps", h.eps}, {"dt", h.dt}, {"c_min", h.c_min}, {"c_max", h.c_max},
                       {"rate", h.rate}, {"h0", h.h0}, {"settle", h.settle},
                       {"checkpoint_spacing", h.checkpoint_spacing}, {"significance", h.significance},
                       {"min_relative", h.min_relative}, {"seeds", h.seeds}};
    const auto& t = c.tongue;
    j["tongue"] = {{"eps", t.eps}, {"dt", t.dt}, {"c_grid", t.c_grid}, {"tau_grid", t.tau_grid},
                   {"rate", t.rate}, {"h0", t.h0}, {"settle", t.settle}};
    const auto& m = c.intermittency;
    j["intermittency"] = {{"c", m.c}, {"eps", m.eps}, {"dt", m.dt}, {"deltas", m.deltas},
                          {"t_unperturbed", m.t_unperturbed}, {"t_total", m.t_total}, {"h0", m.h0},
                          {"record_stride", m.record_stride}, {"seeds", m.seeds}};
    const auto& u = c.multistability;
    j["multistability"] = {{"c", u.c}, {"eps", u.eps}, {"dt", u.dt}, {"trials", u.trials},
                           {"h0_range", {u.h0_min, u.h0_max}}, {"explore", u.explore},
                           {"settle", u.settle}, {"merge_tol", u.merge_tol}};
    return j;
}

}  // namespace mtip::io
