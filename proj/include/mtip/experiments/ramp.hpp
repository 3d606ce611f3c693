#pragma once

#include <cmath>

#include "mtip/core/errors.hpp"
#include "mtip/core/integrator.hpp"
#include "mtip/observables/amplitude.hpp"

namespace mtip::experiments {

struct RampResult {
    TimeSeries series;
    /// Envelope with c_values at window centers.
    AmplitudeSeries envelope;
};

/// Integrates under a linear ramp from c_start until c reaches c_stop. With
/// rate == 0 the run is a constant-c run ending at config.t_end. The series
/// keeps every record_stride-th step; the envelope sees every step.
inline RampResult ramp_run(ModelParams params, double c_start, double c_stop, double rate,
                           const HistorySpec& history, IntegratorConfig config,
                           double window = kDefaultWindow, double stride = kDefaultWindow / 2) {
    if (rate > 0.0 && !(c_stop > c_start)) throw InvalidArgument("rate > 0 requires c_stop > c_start");
    if (rate < 0.0 && !(c_stop < c_start)) throw InvalidArgument("rate < 0 requires c_stop < c_start");

    params.c_base = c_start;
    double t0 = config.t_start;
    if (const auto* r = std::get_if<ReplaySegment>(&history)) t0 = r->source.t_last();

    ParamSchedule sched = schedule::Constant{};
    if (rate != 0.0) {
        sched = schedule::LinearRamp{rate, t0, c_stop};
        config.t_end = t0 + (c_stop - c_start) / rate;
    }

    RampResult out;
    out.series.dt_sample = config.dt * static_cast<double>(config.record_stride);
    EnvelopeAccumulator env(t0, config.dt, window, stride);
    bool first = true;
    auto tail = integrate_stream(params, sched, history, config, [&](const StepSample& s) {
        if (first) {
            out.series.t0 = s.t;
            first = false;
        }
        if (s.step % config.record_stride == 0) out.series.values.push_back(s.h);
        env(s);
    });
    out.series.meta = tail.meta;
    out.envelope = env.take();
    tag_forcing(out.envelope, [&](double t) { return evaluate_schedule(sched, params.c_base, t); });
    return out;
}

}  // namespace mtip::experiments
