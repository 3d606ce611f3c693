#pragma once

// Jump detection on a c-tagged amplitude envelope.
//
// The envelope is smoothed with a centred running median. A jump starts at a
// smoothed step larger than the significance threshold
//   threshold = significance * median |a[i+1] - a[i]|   (raw envelope)
// and extends over neighbouring steps of the same sign larger than
// continuation * threshold. Its size is the total change across the run and
// its location the midpoint c of the run. Runs separated by fewer than
// smooth_width windows cannot be resolved by the smoother and are merged.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "mtip/core/errors.hpp"
#include "mtip/observables/amplitude.hpp"

namespace mtip::experiments {

struct DropEvent {
    double c = 0.0;
    /// Always positive.
    double size = 0.0;
    std::size_t first = 0;
    std::size_t last = 0;
};

struct DropOptions {
    std::size_t smooth_width = 5;
    double significance = 5.0;
    double continuation = 0.25;
    /// Lower bound on the threshold as a fraction of the median envelope level.
    double min_relative = 0.0;
};

namespace detail {

inline double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    double m = *mid;
    if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), mid));
    return m;
}

inline std::vector<double> running_median(const std::vector<double>& a, std::size_t width) {
    const std::size_t half = width / 2;
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(a.size(), i + half + 1);
        out[i] = median_of(std::vector<double>(a.begin() + static_cast<std::ptrdiff_t>(lo),
                                               a.begin() + static_cast<std::ptrdiff_t>(hi)));
    }
    return out;
}

/// sign = -1 for drops, +1 for rises.
inline std::vector<DropEvent> detect_jumps(const AmplitudeSeries& amps, const DropOptions& opt,
                                           double sign) {
    if (amps.c_values.size() != amps.amps.size())
        throw InvalidArgument("envelope must be tagged with c at every window");
    std::vector<DropEvent> events;
    if (amps.size() < 2) return events;

    std::vector<double> raw_steps(amps.size() - 1);
    for (std::size_t i = 0; i + 1 < amps.size(); ++i)
        raw_steps[i] = std::abs(amps.amps[i + 1] - amps.amps[i]);
    double threshold = opt.significance * median_of(raw_steps);
    threshold = std::max(threshold, opt.min_relative * median_of(amps.amps));
    if (!(threshold > 0.0)) threshold = std::numeric_limits<double>::min();

    const auto level = running_median(amps.amps, std::max<std::size_t>(1, opt.smooth_width));
    std::vector<double> step(level.size() - 1);
    for (std::size_t i = 0; i + 1 < level.size(); ++i) step[i] = sign * (level[i + 1] - level[i]);

    const double extend = opt.continuation * threshold;
    std::size_t i = 0;
    std::size_t floor_index = 0;
    while (i < step.size()) {
        if (step[i] <= threshold) {
            ++i;
            continue;
        }
        std::size_t a = i, b = i;
        while (a > floor_index && step[a - 1] > extend) --a;
        while (b + 1 < step.size() && step[b + 1] > extend) ++b;
        if (!events.empty() && a < events.back().last + opt.smooth_width) {
            a = events.back().first;
            events.pop_back();
        }
        DropEvent ev;
        ev.first = a;
        ev.last = b + 1;
        ev.size = sign * (level[ev.last] - level[ev.first]);
        ev.c = 0.5 * (amps.c_values[ev.first] + amps.c_values[ev.last]);
        events.push_back(ev);
        i = b + 1;
        floor_index = i;
    }
    return events;
}

}  // namespace detail

/// Significant decreases of the envelope, ordered along the series.
inline std::vector<DropEvent> detect_drops(const AmplitudeSeries& amps, const DropOptions& opt = {}) {
    return detail::detect_jumps(amps, opt, -1.0);
}

/// Significant increases of the envelope (sizes positive).
inline std::vector<DropEvent> detect_rises(const AmplitudeSeries& amps, const DropOptions& opt = {}) {
    return detail::detect_jumps(amps, opt, +1.0);
}

}  // namespace mtip::experiments
