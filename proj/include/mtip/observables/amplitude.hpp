#pragma once

// Amplitude envelope amp[h] = max(h) - min(h) over sliding time windows.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <utility>
#include <vector>

#include "mtip/core/errors.hpp"
#include "mtip/core/integrator.hpp"

namespace mtip {

inline constexpr double kDefaultWindow = 200.0;

struct AmplitudeSeries {
    double window = kDefaultWindow;
    double stride = kDefaultWindow / 2;
    std::vector<double> centers;
    std::vector<double> amps;
    /// Forcing amplitude at each window center; empty unless tagged.
    std::vector<double> c_values;

    std::size_t size() const noexcept { return amps.size(); }
    bool empty() const noexcept { return amps.empty(); }
};

/// Running max and min over the last `width` pushed samples (monotone deques).
class SlidingExtrema {
public:
    explicit SlidingExtrema(std::int64_t width) : width_(width) {}

    void push(double v) {
        const std::int64_t i = count_++;
        while (!maxq_.empty() && maxq_.back().second <= v) maxq_.pop_back();
        maxq_.emplace_back(i, v);
        while (!minq_.empty() && minq_.back().second >= v) minq_.pop_back();
        minq_.emplace_back(i, v);
        const std::int64_t oldest = i - width_ + 1;
        while (maxq_.front().first < oldest) maxq_.pop_front();
        while (minq_.front().first < oldest) minq_.pop_front();
    }

    bool full() const noexcept { return count_ >= width_; }
    std::int64_t count() const noexcept { return count_; }
    double max() const noexcept { return maxq_.front().second; }
    double min() const noexcept { return minq_.front().second; }
    double range() const noexcept { return max() - min(); }

private:
    std::int64_t width_;
    std::int64_t count_ = 0;
    std::deque<std::pair<std::int64_t, double>> maxq_;
    std::deque<std::pair<std::int64_t, double>> minq_;
};

/// Streaming envelope. Window k covers samples [k*s, k*s + w) where
/// w = round(window / dt_sample) and s = round(stride / dt_sample).
class EnvelopeAccumulator {
public:
    EnvelopeAccumulator(double t0, double dt_sample, double window, double stride)
        : t0_(t0), extrema_(samples_for(window, dt_sample)) {
        if (!(window > 0.0) || !(stride > 0.0))
            throw InvalidArgument("window and stride must be > 0");
        w_ = samples_for(window, dt_sample);
        s_ = samples_for(stride, dt_sample);
        out_.window = window;
        out_.stride = stride;
    }

    void push(double h) {
        extrema_.push(h);
        const std::int64_t n = extrema_.count();
        if (n >= w_ && (n - w_) % s_ == 0) {
            const auto k = static_cast<double>((n - w_) / s_);
            out_.centers.push_back(t0_ + k * out_.stride + out_.window / 2);
            out_.amps.push_back(extrema_.range());
        }
    }

    void operator()(const StepSample& s) { push(s.h); }

    std::int64_t window_samples() const noexcept { return w_; }
    const AmplitudeSeries& result() const noexcept { return out_; }
    AmplitudeSeries take() { return std::move(out_); }

private:
    static std::int64_t samples_for(double span, double dt_sample) {
        if (!(dt_sample > 0.0)) throw InvalidArgument("dt_sample must be > 0");
        return std::max<std::int64_t>(1, std::llround(span / dt_sample));
    }

    double t0_;
    SlidingExtrema extrema_;
    std::int64_t w_ = 1;
    std::int64_t s_ = 1;
    AmplitudeSeries out_;
};

/// Envelope of a stored series; stride defaults to window / 2.
inline AmplitudeSeries amp_window(const TimeSeries& ts, double window = kDefaultWindow,
                                  double stride = std::numeric_limits<double>::quiet_NaN()) {
    if (std::isnan(stride)) stride = window / 2;
    EnvelopeAccumulator acc(ts.t0, ts.dt_sample, window, stride);
    if (static_cast<std::int64_t>(ts.size()) < acc.window_samples())
        throw SeriesTooShort("SeriesTooShort: series spans fewer samples than one window");
    for (double v : ts.values) acc.push(v);
    return acc.take();
}

/// Attach c(t_center) to every window.
template <class CAt>
void tag_forcing(AmplitudeSeries& amps, CAt&& c_at) {
    amps.c_values.clear();
    amps.c_values.reserve(amps.centers.size());
    for (double t : amps.centers) amps.c_values.push_back(c_at(t));
}

/// Windows whose centers lie in [t_from, t_to).
inline AmplitudeSeries slice_by_time(const AmplitudeSeries& a, double t_from, double t_to) {
    AmplitudeSeries out;
    out.window = a.window;
    out.stride = a.stride;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.centers[i] < t_from || a.centers[i] >= t_to) continue;
        out.centers.push_back(a.centers[i]);
        out.amps.push_back(a.amps[i]);
        if (!a.c_values.empty()) out.c_values.push_back(a.c_values[i]);
    }
    return out;
}

}  // namespace mtip
