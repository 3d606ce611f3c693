#pragma once

// Stroboscopic section: the state sampled at integer times (forcing period 1),
// paired with its delayed value h(n - tau_eff) as the second coordinate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "mtip/core/errors.hpp"
#include "mtip/core/integrator.hpp"

namespace mtip {

struct SectionPoint {
    double h = 0.0;
    double h_delayed = 0.0;

    friend bool operator==(const SectionPoint&, const SectionPoint&) = default;
};

struct StroboscopicSection {
    double t_start = 0.0;
    std::vector<SectionPoint> points;

    std::size_t size() const noexcept { return points.size(); }
};

inline double distance(const SectionPoint& a, const SectionPoint& b) noexcept {
    return std::hypot(a.h - b.h, a.h_delayed - b.h_delayed);
}

/// Section of a stored series. Requires 1/dt_sample and tau_eff/dt_sample to
/// be integers so both coordinates are read from stored samples.
inline StroboscopicSection stroboscopic(const TimeSeries& ts, double tau_eff) {
    if (!(ts.dt_sample > 0.0)) throw IncommensurateSampling("IncommensurateSampling: dt_sample <= 0");
    const double per = 1.0 / ts.dt_sample;
    if (std::abs(per - std::round(per)) > 1e-9 * std::max(1.0, per))
        throw IncommensurateSampling("IncommensurateSampling: 1/dt_sample is not an integer");
    const double lag = tau_eff / ts.dt_sample;
    if (std::abs(lag - std::round(lag)) > 1e-6)
        throw IncommensurateSampling("IncommensurateSampling: tau_eff is not a multiple of dt_sample");
    const auto period = std::llround(per);
    const auto lag_samples = std::llround(lag);
    const double start = ts.t0 / ts.dt_sample;
    if (std::abs(start - std::round(start)) > 1e-6)
        throw IncommensurateSampling("IncommensurateSampling: t0 is not on the sampling grid");
    if (static_cast<std::int64_t>(ts.size()) <= lag_samples)
        throw SeriesTooShort("SeriesTooShort: series does not span tau_eff");

    const std::int64_t k0 = std::llround(start);
    StroboscopicSection out;
    bool first = true;
    for (std::int64_t i = lag_samples; i < static_cast<std::int64_t>(ts.size()); ++i) {
        if (((k0 + i) % period + period) % period != 0) continue;
        if (first) {
            out.t_start = ts.time_at(static_cast<std::size_t>(i));
            first = false;
        }
        out.points.push_back({ts.values[static_cast<std::size_t>(i)],
                              ts.values[static_cast<std::size_t>(i - lag_samples)]});
    }
    return out;
}

/// Streaming section collector for integrate_stream.
class SectionAccumulator {
public:
    void operator()(const StepSample& s) {
        if (s.phase < 0)
            throw IncommensurateSampling("IncommensurateSampling: dt does not divide the forcing period");
        if (s.phase != 0) return;
        if (out_.points.empty()) out_.t_start = s.t;
        out_.points.push_back({s.h, s.h_delayed});
    }

    const StroboscopicSection& result() const noexcept { return out_; }
    StroboscopicSection take() { return std::move(out_); }

private:
    StroboscopicSection out_;
};

}  // namespace mtip
