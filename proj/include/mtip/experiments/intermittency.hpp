#pragma once

// Step-perturbation protocol: hold c, step it by delta at t_unperturbed and
// measure residence in the upper and lower amplitude states afterwards.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mtip/core/errors.hpp"
#include "mtip/core/integrator.hpp"
#include "mtip/experiments/work_pool.hpp"
#include "mtip/observables/amplitude.hpp"
#include "mtip/observables/residence.hpp"

namespace mtip::experiments {

enum class ThresholdSource { PerResult, Pooled, None };

inline const char* to_string(ThresholdSource s) {
    switch (s) {
        case ThresholdSource::PerResult: return "per_result";
        case ThresholdSource::Pooled: return "pooled";
        default: return "none";
    }
}

struct IntermittencyOptions {
    double dt = 2.5e-4;
    double h0 = 1.0;
    double window = kDefaultWindow;
    /// Stride of the reported envelope; residence always uses stride = window.
    double stride = kDefaultWindow / 2;
    /// Keep every n-th step of the trajectory; 0 keeps none.
    std::int64_t record_stride = 0;
    std::uint64_t master_seed = 0;
    unsigned threads = 1;
};

struct IntermittencyResult {
    double delta_c = 0.0;
    std::uint64_t seed = 0;
    double t_step = 0.0;
    /// Empty unless options.record_stride > 0.
    TimeSeries series;
    /// Whole-run envelope tagged with c.
    AmplitudeSeries amps;
    /// Non-overlapping windows after the step; input to `stats`.
    AmplitudeSeries post_amps;
    ThresholdChoice threshold;
    ThresholdSource threshold_source = ThresholdSource::None;
    ResidenceStats stats;
};

/// One result per (delta, seed), ordered delta-major. Seed s draws noise from
/// substream s for every delta, so runs share their unperturbed segment.
/// A per-result threshold that fails to separate two states is replaced by
/// one chosen over all post-step windows; if that fails too, every window
/// counts as upper.
inline std::vector<IntermittencyResult> intermittency_protocol(
    const ModelParams& params, const std::vector<double>& deltas, double t_unperturbed,
    double t_total, const std::vector<std::uint64_t>& seeds, const IntermittencyOptions& o = {}) {
    params.validate();
    if (deltas.empty()) throw InvalidArgument("deltas must be nonempty");
    if (seeds.empty()) throw InvalidArgument("seeds must be nonempty");
    if (!(t_unperturbed >= 0.0)) throw InvalidArgument("t_unperturbed must be >= 0");
    if (!(t_total > t_unperturbed)) throw InvalidArgument("t_total must exceed t_unperturbed");
    if (!(t_total - t_unperturbed >= o.window))
        throw InvalidArgument("post-step segment shorter than one window");
    if (o.record_stride < 0) throw InvalidArgument("record_stride must be >= 0");
    for (double d : deltas)
        if (!std::isfinite(d) || params.c_base + d < 0.0)
            throw InvalidArgument("c + delta must be finite and >= 0");
    effective_tau(params.tau, o.dt);

    const std::size_t ns = seeds.size();
    std::vector<IntermittencyResult> out(deltas.size() * ns);
    parallel_for(out.size(), o.threads, [&](std::size_t k) {
        auto& r = out[k];
        r.delta_c = deltas[k / ns];
        r.seed = seeds[k % ns];
        r.t_step = t_unperturbed;

        const ParamSchedule sched = schedule::StepPerturbation{t_unperturbed, r.delta_c};
        IntegratorConfig cfg;
        cfg.dt = o.dt;
        cfg.t_end = t_total;
        cfg.seed = o.master_seed;
        cfg.substream = r.seed;

        EnvelopeAccumulator env(0.0, o.dt, o.window, o.stride);
        EnvelopeAccumulator post(t_unperturbed, o.dt, o.window, o.window);
        const double post_from = t_unperturbed - 0.5 * o.dt;
        r.series.dt_sample = o.dt * static_cast<double>(std::max<std::int64_t>(1, o.record_stride));
        auto tail = integrate_stream(params, sched, ConstantHistory{o.h0}, cfg, [&](const StepSample& s) {
            env(s);
            if (s.t >= post_from) post(s);
            if (o.record_stride > 0 && s.step % o.record_stride == 0) r.series.values.push_back(s.h);
        });
        r.series.meta = tail.meta;
        r.amps = env.take();
        tag_forcing(r.amps, [&](double t) { return evaluate_schedule(sched, params.c_base, t); });
        r.post_amps = post.take();
        tag_forcing(r.post_amps, [&](double t) { return evaluate_schedule(sched, params.c_base, t); });
        r.threshold = choose_threshold(r.post_amps);
    });

    std::vector<double> pooled_values;
    for (const auto& r : out) pooled_values.insert(pooled_values.end(), r.post_amps.amps.begin(), r.post_amps.amps.end());
    const ThresholdChoice pooled = choose_threshold(std::move(pooled_values));

    for (auto& r : out) {
        double thr = r.threshold.threshold;
        if (r.threshold.reliable) {
            r.threshold_source = ThresholdSource::PerResult;
        } else if (pooled.reliable) {
            r.threshold = pooled;
            r.threshold_source = ThresholdSource::Pooled;
            thr = pooled.threshold;
        } else {
            r.threshold_source = ThresholdSource::None;
            thr = -std::numeric_limits<double>::infinity();
        }
        r.stats = residence_times(r.post_amps, thr);
    }
    return out;
}

/// Mean fraction_lower over the results with the given delta.
inline double mean_fraction_lower(const std::vector<IntermittencyResult>& rs, double delta) {
    double sum = 0.0;
    int n = 0;
    for (const auto& r : rs)
        if (r.delta_c == delta) {
            sum += r.stats.fraction_lower;
            ++n;
        }
    return n ? sum / n : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace mtip::experiments
