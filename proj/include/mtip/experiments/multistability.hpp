#pragma once

// Coexisting attractors at fixed c: many trials from stratified constant
// histories, each classified after a long run, grouped by amplitude.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "mtip/core/errors.hpp"
#include "mtip/core/integrator.hpp"
#include "mtip/experiments/checkpoints.hpp"
#include "mtip/experiments/work_pool.hpp"
#include "mtip/observables/amplitude.hpp"
#include "mtip/observables/locking.hpp"

namespace mtip::experiments {

struct MultistabilityOptions {
    double dt = 1e-3;
    double h0_min = -0.2;
    double h0_max = 0.2;
    /// Noisy phase at the model's eps; skipped when eps == 0.
    double explore = 1e4;
    /// Deterministic relaxation after the noisy phase.
    double settle = 2000.0;
    double window = kDefaultWindow;
    /// Single-linkage gap below which sorted amplitudes share a group.
    double merge_tol = 0.03;
    LockingOptions locking;
    std::uint64_t master_seed = 0;
    unsigned threads = 1;
};

struct TrialOutcome {
    std::size_t trial = 0;
    double h0 = 0.0;
    /// Mean of non-overlapping window amplitudes over the measuring phase.
    double amp = 0.0;
    AttractorClass cls;
    std::size_t group = 0;
};

struct StateGroup {
    /// Most frequent class among members; ties go to the first seen.
    AttractorClass cls;
    double amp = 0.0;
    std::size_t basin_count = 0;
};

struct MultistabilityReport {
    double c = 0.0;
    std::vector<TrialOutcome> trials;
    /// Ordered by increasing amplitude.
    std::vector<StateGroup> groups;
};

/// Length of the measuring phase: one section long enough to classify and at
/// least one window.
inline double measuring_span(const MultistabilityOptions& o) {
    return std::max(o.window, static_cast<double>(min_section_points(o.locking)));
}

namespace detail {

inline TrialOutcome run_trial(const ModelParams& params, double h0, std::uint64_t substream,
                              const MultistabilityOptions& o) {
    HistorySpec history = ConstantHistory{h0};
    double t = 0.0;
    if (params.eps > 0.0 && o.explore > 0.0) {
        IntegratorConfig cfg;
        cfg.dt = o.dt;
        cfg.t_end = o.explore;
        cfg.seed = o.master_seed;
        cfg.substream = substream;
        history = ReplaySegment{integrate_stream(params, schedule::Constant{}, history, cfg, [](const StepSample&) {})};
        t = o.explore;
    }

    ModelParams quiet = params;
    quiet.eps = 0.0;
    const double measure = measuring_span(o);
    const double t_measure = t + o.settle;
    IntegratorConfig cfg;
    cfg.dt = o.dt;
    cfg.t_start = t;
    cfg.t_end = t_measure + measure;

    CheckpointProbe probe({cfg.t_end}, o.dt, measure, o.locking);
    EnvelopeAccumulator env(t_measure, o.dt, o.window, o.window);
    const double from = t_measure - 0.5 * o.dt;
    integrate_stream(quiet, schedule::Constant{}, history, cfg, [&](const StepSample& s) {
        probe(s);
        if (s.t >= from) env(s);
    });

    TrialOutcome out;
    out.h0 = h0;
    const auto cp = probe.take().front();
    if (!cp.error.empty()) throw InsufficientData(cp.error);
    out.cls = cp.cls;
    const auto amps = env.take().amps;
    out.amp = amps.empty() ? cp.amp : std::accumulate(amps.begin(), amps.end(), 0.0) / static_cast<double>(amps.size());
    return out;
}

}  // namespace detail

/// Groups outcomes in place and returns the groups ordered by amplitude.
inline std::vector<StateGroup> group_states(std::vector<TrialOutcome>& trials, double merge_tol) {
    std::vector<std::size_t> order(trials.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return trials[a].amp < trials[b].amp; });

    std::vector<std::vector<std::size_t>> members;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto i = order[k];
        if (k == 0 || !(trials[i].amp - trials[order[k - 1]].amp < merge_tol)) members.emplace_back();
        members.back().push_back(i);
        trials[i].group = members.size() - 1;
    }

    std::vector<StateGroup> groups;
    for (const auto& m : members) {
        StateGroup g;
        g.basin_count = m.size();
        std::map<std::string, std::size_t> votes;
        std::size_t best = 0;
        for (auto i : m) {
            g.amp += trials[i].amp;
            const auto n = ++votes[trials[i].cls.label()];
            if (n > best) {
                best = n;
                g.cls = trials[i].cls;
            }
        }
        g.amp /= static_cast<double>(m.size());
        groups.push_back(g);
    }
    return groups;
}

/// Trial i starts from h0 at the midpoint of stratum i of [h0_min, h0_max]
/// and draws noise from substream seeds[i] (i when seeds is empty).
inline MultistabilityReport multistability_probe(ModelParams params, double c, std::size_t trials,
                                                 const std::vector<std::uint64_t>& seeds = {},
                                                 const MultistabilityOptions& o = {}) {
    params.c_base = c;
    params.validate();
    if (trials < 10) throw InvalidArgument("trials must be >= 10");
    if (!seeds.empty() && seeds.size() != trials)
        throw InvalidArgument("seeds must be empty or hold one entry per trial");
    if (!(o.h0_min <= o.h0_max) || !std::isfinite(o.h0_min) || !std::isfinite(o.h0_max))
        throw InvalidArgument("h0 range must be a finite interval");
    if (!(o.merge_tol >= 0.0)) throw InvalidArgument("merge_tol must be >= 0");
    if (!(o.settle >= 0.0) || !(o.explore >= 0.0)) throw InvalidArgument("phase lengths must be >= 0");
    effective_tau(params.tau, o.dt);

    MultistabilityReport rep;
    rep.c = c;
    rep.trials.resize(trials);
    const double width = o.h0_max - o.h0_min;
    parallel_for(trials, o.threads, [&](std::size_t i) {
        const double h0 = o.h0_min + width * (static_cast<double>(i) + 0.5) / static_cast<double>(trials);
        rep.trials[i] = detail::run_trial(params, h0, seeds.empty() ? i : seeds[i], o);
        rep.trials[i].trial = i;
    });
    rep.groups = group_states(rep.trials, o.merge_tol);
    return rep;
}

}  // namespace mtip::experiments
