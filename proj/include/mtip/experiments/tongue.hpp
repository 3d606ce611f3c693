#pragma once

// Amplitude and locking map over a (c, tau) grid. Each tau row is one slow
// up-ramp through the c grid; rows are independent.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mtip/core/errors.hpp"
#include "mtip/core/integrator.hpp"
#include "mtip/experiments/checkpoints.hpp"
#include "mtip/experiments/work_pool.hpp"
#include "mtip/observables/locking.hpp"

namespace mtip::experiments {

struct TongueOptions {
    double dt = 1e-3;
    double h0 = 1.0;
    /// Time held at the first grid c before the ramp starts.
    double settle = 2000.0;
    double window = kDefaultWindow;
    LockingOptions locking;
    std::uint64_t master_seed = 0;
    unsigned threads = 1;
};

struct TongueMap {
    std::vector<double> c_grid;
    std::vector<double> tau_grid;
    /// Row-major: cells[row * c_grid.size() + col], row indexes tau.
    std::vector<Checkpoint> cells;

    const Checkpoint& at(std::size_t row, std::size_t col) const {
        return cells.at(row * c_grid.size() + col);
    }
    double amp(std::size_t row, std::size_t col) const { return at(row, col).amp; }
    const AttractorClass& cls(std::size_t row, std::size_t col) const { return at(row, col).cls; }
};

namespace detail {

inline void check_grid(const std::vector<double>& g, const char* name) {
    if (g.empty()) throw InvalidArgument(std::string(name) + " must be nonempty");
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!std::isfinite(g[i])) throw InvalidArgument(std::string(name) + " must be finite");
        if (i > 0 && !(g[i] > g[i - 1]))
            throw InvalidArgument(std::string(name) + " must be strictly increasing");
    }
}

/// One tau row. Integration failures are written into the unreached cells.
inline std::vector<Checkpoint> tongue_row(ModelParams p, const std::vector<double>& c_grid,
                                          double rate, std::uint64_t substream,
                                          const TongueOptions& o) {
    p.c_base = c_grid.front();
    std::vector<double> times;
    times.reserve(c_grid.size());
    for (double c : c_grid) times.push_back(o.settle + (rate > 0.0 ? (c - c_grid.front()) / rate : 0.0));

    CheckpointProbe probe(times, o.dt, o.window, o.locking);
    IntegratorConfig cfg;
    cfg.dt = o.dt;
    cfg.t_end = times.back();
    cfg.seed = o.master_seed;
    cfg.substream = substream;
    const ParamSchedule sched = rate > 0.0 ? ParamSchedule{schedule::LinearRamp{rate, o.settle, c_grid.back()}}
                                           : ParamSchedule{schedule::Constant{}};
    try {
        integrate_stream(p, sched, ConstantHistory{o.h0}, cfg, probe);
    } catch (const NonFiniteState& e) {
        probe.fail_remaining(e.what());
    }
    auto cells = probe.take();
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i].c = c_grid[i];
    return cells;
}

/// Constant-c cell used when the ramp rate is zero.
inline Checkpoint tongue_cell(ModelParams p, double c, std::uint64_t substream, const TongueOptions& o) {
    return tongue_row(std::move(p), std::vector<double>{c}, 0.0, substream, o).front();
}

}  // namespace detail

/// With rate == 0 every cell is an independent constant-c run of length
/// `settle`. Row r draws noise from substream r (cell r * nc + col at rate 0).
inline TongueMap tongue_scan(const ModelParams& params, const std::vector<double>& c_grid,
                             const std::vector<double>& tau_grid, double rate,
                             const TongueOptions& o = {}) {
    params.validate();
    detail::check_grid(c_grid, "c_grid");
    detail::check_grid(tau_grid, "tau_grid");
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw InvalidArgument("rate must be >= 0");
    if (c_grid.front() < 0.0) throw InvalidArgument("c_grid values must be >= 0");
    if (!(o.settle >= o.window)) throw InvalidArgument("settle must cover at least one window");
    for (double tau : tau_grid) effective_tau(tau, o.dt);

    TongueMap map{c_grid, tau_grid, {}};
    const std::size_t nc = c_grid.size();
    map.cells.resize(nc * tau_grid.size());

    if (rate > 0.0) {
        parallel_for(tau_grid.size(), o.threads, [&](std::size_t r) {
            ModelParams p = params;
            p.tau = tau_grid[r];
            auto row = detail::tongue_row(p, c_grid, rate, r, o);
            std::move(row.begin(), row.end(), map.cells.begin() + static_cast<std::ptrdiff_t>(r * nc));
        });
    } else {
        parallel_for(map.cells.size(), o.threads, [&](std::size_t k) {
            ModelParams p = params;
            p.tau = tau_grid[k / nc];
            map.cells[k] = detail::tongue_cell(p, c_grid[k % nc], k, o);
        });
    }
    return map;
}

/// Indices of the longest run of consecutive cells in `row` locked at p:q.
inline std::pair<std::size_t, std::size_t> longest_locked_run(const TongueMap& map, std::size_t row,
                                                              int p, int q) {
    std::size_t best_a = 0, best_len = 0, a = 0, len = 0;
    for (std::size_t col = 0; col < map.c_grid.size(); ++col) {
        const auto r = map.cls(row, col).ratio();
        if (r && r->p == p && r->q == q) {
            if (len++ == 0) a = col;
            if (len > best_len) {
                best_len = len;
                best_a = a;
            }
        } else {
            len = 0;
        }
    }
    return {best_a, best_len};
}

}  // namespace mtip::experiments
