#pragma once

// Two-state residence statistics on an amplitude envelope.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "mtip/core/errors.hpp"
#include "mtip/observables/amplitude.hpp"

namespace mtip {

struct ResidenceStats {
    double threshold = 0.0;
    int visits_upper = 0;
    int visits_lower = 0;
    std::vector<double> durations_upper;
    std::vector<double> durations_lower;
    double fraction_lower = 0.0;

    double total_time() const {
        return std::accumulate(durations_upper.begin(), durations_upper.end(), 0.0) +
               std::accumulate(durations_lower.begin(), durations_lower.end(), 0.0);
    }
};

/// Windows with amp > threshold are "upper"; each window accounts for one
/// stride of time, so durations are additive for non-overlapping windows.
inline ResidenceStats residence_times(const AmplitudeSeries& amps, double threshold) {
    ResidenceStats st;
    st.threshold = threshold;
    if (amps.empty()) return st;

    const double stride = amps.stride;
    std::size_t lower_windows = 0;
    std::size_t i = 0;
    while (i < amps.size()) {
        const bool upper = amps.amps[i] > threshold;
        std::size_t j = i;
        while (j < amps.size() && (amps.amps[j] > threshold) == upper) ++j;
        const double dur = static_cast<double>(j - i) * stride;
        if (upper) {
            ++st.visits_upper;
            st.durations_upper.push_back(dur);
        } else {
            ++st.visits_lower;
            st.durations_lower.push_back(dur);
            lower_windows += j - i;
        }
        i = j;
    }
    st.fraction_lower = static_cast<double>(lower_windows) / static_cast<double>(amps.size());
    return st;
}

/// Fewer windows than this are always flagged unreliable.
inline constexpr std::size_t kMinThresholdWindows = 20;

struct ThresholdChoice {
    double threshold = 0.0;
    double center_low = 0.0;
    double center_high = 0.0;
    double sd_low = 0.0;
    double sd_high = 0.0;
    /// 2 * (sd_low + sd_high); centers closer than this are not resolved.
    double pooled_spread = 0.0;
    bool reliable = false;
};

/// Midpoint between the centers of the exact 1-D two-means split.
inline ThresholdChoice choose_threshold(std::vector<double> values) {
    ThresholdChoice out;
    if (values.empty()) return out;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n == 1 || values.front() == values.back()) {
        out.threshold = out.center_low = out.center_high = values.front();
        return out;
    }

    std::vector<double> prefix(n + 1, 0.0), prefix_sq(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + values[i];
        prefix_sq[i + 1] = prefix_sq[i] + values[i] * values[i];
    }
    auto sse = [&](std::size_t a, std::size_t b) {
        const double m = static_cast<double>(b - a);
        const double s = prefix[b] - prefix[a];
        return std::max(0.0, (prefix_sq[b] - prefix_sq[a]) - s * s / m);
    };

    std::size_t best = 1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < n; ++k) {
        if (values[k] == values[k - 1]) continue;
        const double cost = sse(0, k) + sse(k, n);
        if (cost < best_cost) {
            best_cost = cost;
            best = k;
        }
    }
    const double nl = static_cast<double>(best), nh = static_cast<double>(n - best);
    out.center_low = prefix[best] / nl;
    out.center_high = (prefix[n] - prefix[best]) / nh;
    out.sd_low = std::sqrt(sse(0, best) / nl);
    out.sd_high = std::sqrt(sse(best, n) / nh);
    out.threshold = 0.5 * (out.center_low + out.center_high);
    out.pooled_spread = 2.0 * (out.sd_low + out.sd_high);
    out.reliable = n >= kMinThresholdWindows &&
                   (out.center_high - out.center_low) > out.pooled_spread;
    return out;
}

inline ThresholdChoice choose_threshold(const AmplitudeSeries& amps) {
    return choose_threshold(amps.amps);
}

}  // namespace mtip
