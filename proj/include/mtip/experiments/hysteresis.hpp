#pragma once

// Quasi-static up and down sweeps in c with amplitude envelopes, periodic
// attractor classification and jump detection.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "mtip/core/errors.hpp"
#include "mtip/core/integrator.hpp"
#include "mtip/experiments/checkpoints.hpp"
#include "mtip/experiments/drops.hpp"
#include "mtip/experiments/work_pool.hpp"
#include "mtip/observables/amplitude.hpp"
#include "mtip/observables/locking.hpp"

namespace mtip::experiments {

enum class SweepDirection { Up, Down };

inline const char* to_string(SweepDirection d) { return d == SweepDirection::Up ? "up" : "down"; }

struct SweepResult {
    SweepDirection direction = SweepDirection::Up;
    /// Window centers, amplitudes and the c value at each center.
    AmplitudeSeries envelope;
    std::vector<Checkpoint> checkpoints;
    /// Drops for an up-sweep, rises for a down-sweep; sizes positive.
    std::vector<DropEvent> events;

    const std::vector<double>& c_values() const noexcept { return envelope.c_values; }
    const std::vector<double>& amps() const noexcept { return envelope.amps; }

    /// Checkpoint covering window i (first checkpoint at or after its center).
    const Checkpoint* checkpoint_for(std::size_t i) const {
        const double t = envelope.centers.at(i);
        auto it = std::lower_bound(checkpoints.begin(), checkpoints.end(), t,
                                   [](const Checkpoint& cp, double v) { return cp.t < v; });
        if (it == checkpoints.end()) return checkpoints.empty() ? nullptr : &checkpoints.back();
        return &*it;
    }
};

inline constexpr double kSweepMinRelative = 0.02;

struct HysteresisOptions {
    double dt = 1e-3;
    /// Upper-branch preparation: ConstantHistory(h0) held at c_min for `settle`.
    double h0 = 1.0;
    double settle = 2000.0;
    double window = kDefaultWindow;
    double stride = kDefaultWindow / 2;
    /// Time between attractor classifications.
    double checkpoint_spacing = 500.0;
    LockingOptions locking;
    /// Sweep envelopes are nearly noise-free, so the median step alone would
    /// flag sub-percent wiggles; require 2% of the typical amplitude as well.
    DropOptions drops{5, 5.0, 0.25, kSweepMinRelative};
    std::uint64_t master_seed = 0;
    unsigned threads = 1;
};

struct HysteresisRun {
    std::uint64_t seed = 0;
    SweepResult up;
    SweepResult down;
};

/// Location of the largest down-sweep rise (return to the upper branch).
inline std::optional<DropEvent> recovery_event(const SweepResult& down) {
    if (down.events.empty()) return std::nullopt;
    return *std::max_element(down.events.begin(), down.events.end(),
                             [](const DropEvent& a, const DropEvent& b) { return a.size < b.size; });
}

/// Integral over c of (amp_up - amp_down), down-sweep interpolated onto the
/// up-sweep grid.
inline double hysteresis_area(const SweepResult& up, const SweepResult& down) {
    std::vector<std::pair<double, double>> d;
    for (std::size_t i = 0; i < down.envelope.size(); ++i)
        d.emplace_back(down.envelope.c_values[i], down.envelope.amps[i]);
    std::sort(d.begin(), d.end());
    if (d.size() < 2 || up.envelope.size() < 2) return 0.0;

    auto down_at = [&](double c) {
        auto it = std::lower_bound(d.begin(), d.end(), std::make_pair(c, -std::numeric_limits<double>::infinity()));
        if (it == d.begin()) return it->second;
        if (it == d.end()) return d.back().second;
        const auto& [c1, a1] = *(it - 1);
        const auto& [c2, a2] = *it;
        return c2 == c1 ? a2 : a1 + (a2 - a1) * (c - c1) / (c2 - c1);
    };

    double area = 0.0;
    const auto& cu = up.envelope.c_values;
    const auto& au = up.envelope.amps;
    for (std::size_t i = 1; i < cu.size(); ++i) {
        const double g0 = au[i - 1] - down_at(cu[i - 1]);
        const double g1 = au[i] - down_at(cu[i]);
        area += 0.5 * (g0 + g1) * (cu[i] - cu[i - 1]);
    }
    return area;
}

namespace detail {

struct SweepLeg {
    SweepResult result;
    TimeSeries tail;
};

inline SweepLeg run_leg(const ModelParams& base, SweepDirection dir, double c_from, double c_to,
                        double rate, const HistorySpec& history, double t_begin, double t_ramp,
                        std::uint64_t seed, std::uint64_t substream, const HysteresisOptions& o) {
    ModelParams p = base;
    p.c_base = c_from;
    const double signed_rate = dir == SweepDirection::Up ? rate : -rate;
    const ParamSchedule sched = schedule::LinearRamp{signed_rate, t_ramp, c_to};
    const double t_end = t_ramp + std::abs(c_to - c_from) / rate;

    IntegratorConfig cfg;
    cfg.dt = o.dt;
    cfg.t_start = t_begin;
    cfg.t_end = t_end;
    cfg.seed = seed;
    cfg.substream = substream;

    std::vector<double> cps;
    for (double t = t_ramp + o.checkpoint_spacing; t <= t_end + 1e-9; t += o.checkpoint_spacing)
        cps.push_back(t);
    CheckpointProbe probe(std::move(cps), o.dt, o.window, o.locking);
    EnvelopeAccumulator env(t_ramp, o.dt, o.window, o.stride);
    const double ramp_from = t_ramp - 0.5 * o.dt;

    SweepLeg leg;
    leg.tail = integrate_stream(p, sched, history, cfg, [&](const StepSample& s) {
        probe(s);
        if (s.t >= ramp_from) env(s);
    });
    leg.result.direction = dir;
    leg.result.envelope = env.take();
    tag_forcing(leg.result.envelope, [&](double t) { return evaluate_schedule(sched, p.c_base, t); });
    leg.result.checkpoints = probe.take();
    return leg;
}

}  // namespace detail

/// One up/down loop per seed. The up-sweep starts on the upper branch; the
/// down-sweep resumes from the up-sweep's terminal segment. Noise for seed s
/// uses substreams 2s (up) and 2s+1 (down) of the master seed.
inline std::vector<HysteresisRun> hysteresis_sweep(const ModelParams& params, double c_min,
                                                   double c_max, double rate,
                                                   const std::vector<std::uint64_t>& seeds,
                                                   const HysteresisOptions& o = {}) {
    params.validate();
    if (!(c_min < c_max)) throw InvalidArgument("c_min must be < c_max");
    if (!(c_min >= 0.0)) throw InvalidArgument("c_min must be >= 0");
    if (!(rate > 0.0)) throw InvalidArgument("rate must be > 0");
    if (seeds.empty()) throw InvalidArgument("at least one seed is required");
    effective_tau(params.tau, o.dt);

    std::vector<HysteresisRun> runs(seeds.size());
    parallel_for(seeds.size(), o.threads, [&](std::size_t i) {
        const std::uint64_t s = seeds[i];
        auto up = detail::run_leg(params, SweepDirection::Up, c_min, c_max, rate, ConstantHistory{o.h0},
                                  0.0, o.settle, o.master_seed, 2 * s, o);
        const double t_turn = up.tail.t_last();
        auto down = detail::run_leg(params, SweepDirection::Down, c_max, c_min, rate,
                                    ReplaySegment{std::move(up.tail)}, t_turn, t_turn, o.master_seed,
                                    2 * s + 1, o);
        runs[i].seed = s;
        runs[i].up = std::move(up.result);
        runs[i].up.events = detect_drops(runs[i].up.envelope, o.drops);
        runs[i].down = std::move(down.result);
        runs[i].down.events = detect_rises(runs[i].down.envelope, o.drops);
    });
    return runs;
}

}  // namespace mtip::experiments
