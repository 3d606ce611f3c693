#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mtip/core/integrator.hpp"
#include "mtip/observables/amplitude.hpp"
#include "mtip/observables/locking.hpp"
#include "mtip/observables/section.hpp"

namespace mtip::experiments {

/// Observation taken at one checkpoint of a run.
struct Checkpoint {
    double t = 0.0;
    double c = 0.0;
    /// max - min over the trailing window; NaN if the run failed first.
    double amp = std::numeric_limits<double>::quiet_NaN();
    AttractorClass cls;
    /// Non-empty when the cell could not be evaluated.
    std::string error;
};

/// Stream sink that, at each requested time, records the trailing-window
/// amplitude and classifies the trailing stroboscopic section.
class CheckpointProbe {
public:
    CheckpointProbe(std::vector<double> times, double dt, double window, LockingOptions locking)
        : times_(std::move(times)),
          dt_(dt),
          window_(window),
          extrema_(width()),
          locking_(locking),
          section_len_(min_section_points(locking)) {
        results_.resize(times_.size());
        for (std::size_t i = 0; i < times_.size(); ++i) results_[i].t = times_[i];
    }

    void operator()(const StepSample& s) {
        // Only the window ending at the next checkpoint matters.
        if (next_ < times_.size() && s.t >= times_[next_] - window_ - dt_) extrema_.push(s.h);
        if (s.phase == 0) {
            trail_.push_back({s.h, s.h_delayed});
            if (trail_.size() > section_len_) trail_.pop_front();
        }
        while (next_ < times_.size() && s.t >= times_[next_] - 0.5 * dt_) {
            auto& r = results_[next_++];
            r.c = s.c;
            r.amp = extrema_.range();
            StroboscopicSection sec;
            sec.points.assign(trail_.begin(), trail_.end());
            try {
                r.cls = detect_locking(sec, locking_);
            } catch (const InsufficientData& e) {
                r.error = e.what();
            }
            if (next_ < times_.size() && times_[next_] - window_ - dt_ > s.t) extrema_ = SlidingExtrema(width());
        }
    }

    /// Marks unreached checkpoints as failed with `why`.
    void fail_remaining(const std::string& why) {
        for (std::size_t i = next_; i < results_.size(); ++i) results_[i].error = why;
        next_ = results_.size();
    }

    std::size_t section_length() const noexcept { return section_len_; }
    const std::vector<Checkpoint>& results() const noexcept { return results_; }
    std::vector<Checkpoint> take() { return std::move(results_); }

private:
    std::int64_t width() const { return std::max<std::int64_t>(1, std::llround(window_ / dt_)); }

    std::vector<double> times_;
    double dt_;
    double window_;
    SlidingExtrema extrema_;
    LockingOptions locking_;
    std::size_t section_len_;
    std::deque<SectionPoint> trail_;
    std::size_t next_ = 0;
    std::vector<Checkpoint> results_;
};

/// Fans one step out to several sinks.
template <class... Sinks>
auto fan_out(Sinks&... sinks) {
    return [&sinks...](const StepSample& s) { (sinks(s), ...); };
}

}  // namespace mtip::experiments
