#pragma once

// Fixed-step Euler-Maruyama integration of the delay model.
//
//   h_{n+1} = h_n + drift(h_{n-d}, t_n, c(t_n), kappa) dt + eps sqrt(dt) xi_n
//
// with d = round(tau / dt). The delayed value is read from a ring buffer exactly
// d steps back; no interpolation. With eps == 0 no random numbers are drawn.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "mtip/core/errors.hpp"
#include "mtip/core/model.hpp"
#include "mtip/core/rng.hpp"

namespace mtip {

inline constexpr double kBlowUpLimit = 1e6;

/// Provenance attached to every integrated series.
struct RunMeta {
    ModelParams params;
    ParamSchedule schedule = schedule::Constant{};
    std::uint64_t seed = 0;
    std::uint64_t substream = 0;
    double dt = 0.0;
    std::int64_t delay_steps = 0;
    double tau_eff = 0.0;
    double t_start = 0.0;
    std::string history = "constant";
};

/// Uniformly sampled trajectory h(t0 + i * dt_sample).
struct TimeSeries {
    double t0 = 0.0;
    double dt_sample = 0.0;
    std::vector<double> values;
    RunMeta meta;

    std::size_t size() const noexcept { return values.size(); }
    bool empty() const noexcept { return values.empty(); }
    double time_at(std::size_t i) const noexcept { return t0 + static_cast<double>(i) * dt_sample; }
    double t_last() const noexcept {
        return values.empty() ? t0 : time_at(values.size() - 1);
    }
};

struct ConstantHistory {
    double h0 = 0.0;
};

/// Resume from stored samples. The last sample is the state at the new start
/// time; the segment must hold at least delay_steps + 1 samples at spacing dt.
struct ReplaySegment {
    TimeSeries source;
};

using HistorySpec = std::variant<ConstantHistory, ReplaySegment>;

struct IntegratorConfig {
    double dt = 1e-3;
    /// Start time for ConstantHistory; a ReplaySegment starts at its last sample.
    double t_start = 0.0;
    double t_end = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t substream = 0;
    std::int64_t record_stride = 1;
};

/// What a sink sees at every step n = 0..N, before the update to n+1.
struct StepSample {
    std::int64_t step;
    double t;
    double h;
    double h_delayed;
    double c;
    /// Step index within the forcing period (0 at integer times), or -1 when
    /// dt does not divide the period.
    std::int64_t phase;
};

namespace detail {

inline bool near_integer(double x, double tol) noexcept {
    return std::abs(x - std::round(x)) <= tol;
}

/// Steps per delay; throws InvalidDelay unless tau is a whole number of steps.
inline std::int64_t delay_steps(double tau, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be > 0");
    if (tau < dt)
        throw InvalidDelay("InvalidDelay: tau=" + std::to_string(tau) + " is smaller than dt=" +
                           std::to_string(dt));
    const double ratio = tau / dt;
    if (!near_integer(ratio, 1e-9))
        throw InvalidDelay("InvalidDelay: tau/dt=" + std::to_string(ratio) +
                           " is not an integer within 1e-9");
    return static_cast<std::int64_t>(std::llround(ratio));
}

/// Forcing phase bookkeeping; commensurate when 1/dt and t0/dt are integers.
struct ForcingTable {
    std::int64_t period_steps = 0;
    std::int64_t phase0 = -1;
    std::vector<double> cosines;

    ForcingTable(double dt, double t0) {
        const double per = 1.0 / dt;
        const double start = t0 / dt;
        if (!near_integer(per, 1e-9 * std::max(1.0, per)) || !near_integer(start, 1e-6)) return;
        period_steps = std::llround(per);
        const std::int64_t s = std::llround(start);
        phase0 = ((s % period_steps) + period_steps) % period_steps;
        cosines.resize(static_cast<std::size_t>(period_steps));
        for (std::int64_t m = 0; m < period_steps; ++m)
            cosines[static_cast<std::size_t>(m)] =
                std::cos(2.0 * std::numbers::pi * static_cast<double>(m) /
                         static_cast<double>(period_steps));
    }

    bool commensurate() const noexcept { return phase0 >= 0; }
};

template <class Schedule, class Sink>
TimeSeries run_loop(const ModelParams& p, const Schedule& sched, std::vector<double> ring,
                    double h, double t0, const IntegratorConfig& cfg, std::int64_t d,
                    Sink& sink) {
    const double dt = cfg.dt;
    const auto total_steps =
        static_cast<std::int64_t>(std::floor((cfg.t_end - t0) / dt + 1e-9));
    ForcingTable forcing(dt, t0);
    const bool table = forcing.commensurate();
    const double sqrt_dt = std::sqrt(dt);
    const bool noisy = p.eps > 0.0;
    GaussianStream noise(cfg.seed, cfg.substream);

    std::size_t idx = 0;
    const auto dsz = static_cast<std::size_t>(d);
    std::int64_t phase = forcing.phase0;

    for (std::int64_t n = 0;; ++n) {
        const double t = t0 + static_cast<double>(n) * dt;
        const double hd = ring[idx];
        const double c = evaluate_schedule(sched, p.c_base, t);
        sink(StepSample{n, t, h, hd, c, table ? phase : -1});
        if (n == total_steps) break;

        ring[idx] = h;
        if (++idx == dsz) idx = 0;

        const double forcing_cos =
            table ? forcing.cosines[static_cast<std::size_t>(phase)]
                  : std::cos(2.0 * std::numbers::pi * t);
        h += (-std::tanh(p.kappa * hd) + c * forcing_cos) * dt;
        if (noisy) h += p.eps * sqrt_dt * noise();
        if (!(std::abs(h) <= kBlowUpLimit)) throw NonFiniteState(t + dt, h);

        if (table && ++phase == forcing.period_steps) phase = 0;
    }

    // Terminal segment: the last d + 1 states, oldest first.
    TimeSeries tail;
    tail.dt_sample = dt;
    tail.t0 = t0 + static_cast<double>(total_steps - d) * dt;
    tail.values.reserve(dsz + 1);
    for (std::size_t k = 0; k < dsz; ++k) tail.values.push_back(ring[(idx + k) % dsz]);
    tail.values.push_back(h);
    return tail;
}

}  // namespace detail

/// Effective delay after rounding to whole steps.
inline double effective_tau(double tau, double dt) {
    return static_cast<double>(detail::delay_steps(tau, dt)) * dt;
}

/// Streams every step to `sink` and returns the terminal segment (d + 1
/// samples at spacing dt) so a later run can resume with ReplaySegment.
template <class Sink>
TimeSeries integrate_stream(const ModelParams& params, const ParamSchedule& sched,
                            const HistorySpec& history, const IntegratorConfig& cfg,
                            Sink&& sink) {
    params.validate();
    const std::int64_t d = detail::delay_steps(params.tau, cfg.dt);
    if (cfg.record_stride < 1) throw InvalidArgument("record_stride must be >= 1");

    std::vector<double> ring(static_cast<std::size_t>(d));
    double h = 0.0;
    double t0 = cfg.t_start;
    std::string history_name;

    if (const auto* ch = std::get_if<ConstantHistory>(&history)) {
        if (!std::isfinite(ch->h0)) throw InvalidArgument("history value must be finite");
        std::fill(ring.begin(), ring.end(), ch->h0);
        h = ch->h0;
        history_name = "constant";
    } else {
        const auto& src = std::get<ReplaySegment>(history).source;
        if (std::abs(src.dt_sample - cfg.dt) > 1e-12 * cfg.dt)
            throw InvalidArgument("ReplaySegment sampling differs from the integrator step");
        if (src.size() < static_cast<std::size_t>(d) + 1)
            throw InvalidArgument("ReplaySegment shorter than the delay");
        const std::size_t last = src.size() - 1;
        for (std::size_t k = 0; k < ring.size(); ++k) ring[k] = src.values[last - ring.size() + k];
        h = src.values[last];
        t0 = src.t_last();
        history_name = "replay";
    }
    if (!(cfg.t_end >= t0 - 1e-12)) throw InvalidArgument("t_end precedes the start time");

    TimeSeries tail = std::visit(
        [&](const auto& s) { return detail::run_loop(params, s, std::move(ring), h, t0, cfg, d, sink); },
        sched);
    tail.meta = RunMeta{params, sched, cfg.seed, cfg.substream, cfg.dt, d,
                        static_cast<double>(d) * cfg.dt, t0, history_name};
    return tail;
}

/// Records every record_stride-th step into a TimeSeries.
inline TimeSeries integrate(const ModelParams& params, const ParamSchedule& sched,
                            const HistorySpec& history, const IntegratorConfig& cfg) {
    TimeSeries out;
    out.dt_sample = cfg.dt * static_cast<double>(cfg.record_stride);
    bool first = true;
    const std::int64_t stride = cfg.record_stride;
    auto recorder = [&](const StepSample& s) {
        if (first) {
            out.t0 = s.t;
            first = false;
        }
        if (s.step % stride == 0) out.values.push_back(s.h);
    };
    TimeSeries tail = integrate_stream(params, sched, history, cfg, recorder);
    out.meta = tail.meta;
    return out;
}

}  // namespace mtip
