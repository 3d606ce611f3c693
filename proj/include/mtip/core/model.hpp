#pragma once

// Scalar delay model with periodic forcing and additive noise:
//
//   dh = ( -tanh(kappa * h(t - tau)) + c(t) * cos(2 pi t) ) dt + eps dW
//
// Time is measured in forcing periods.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>

#include "mtip/core/errors.hpp"

namespace mtip {

struct ModelParams {
    double kappa = 11.0;
    double tau = 0.953;
    double c_base = 0.0;
    double eps = 0.0;

    void validate() const {
        if (!std::isfinite(kappa) || !(kappa > 0.0))
            throw InvalidArgument("kappa must be > 0");
        if (!std::isfinite(tau) || !(tau > 0.0))
            throw InvalidArgument("tau must be > 0");
        if (!std::isfinite(c_base) || !(c_base >= 0.0))
            throw InvalidArgument("c must be >= 0");
        if (!std::isfinite(eps) || !(eps >= 0.0))
            throw InvalidArgument("eps must be >= 0");
    }
};

namespace schedule {

struct Constant {};

/// c(t) = c_base + rate * (t - t_start) for t >= t_start, clamped at `stop`.
struct LinearRamp {
    double rate = 0.0;
    double t_start = 0.0;
    std::optional<double> stop;
};

/// c(t) = c_base for t < t_step, c_base + delta afterwards.
struct StepPerturbation {
    double t_step = 0.0;
    double delta = 0.0;
};

}  // namespace schedule

using ParamSchedule =
    std::variant<schedule::Constant, schedule::LinearRamp, schedule::StepPerturbation>;

inline double evaluate_schedule(const schedule::Constant&, double c_base, double) noexcept {
    return c_base;
}

inline double evaluate_schedule(const schedule::LinearRamp& r, double c_base, double t) noexcept {
    if (t <= r.t_start) return c_base;
    double c = c_base + r.rate * (t - r.t_start);
    if (r.stop) {
        if (r.rate > 0.0 && c > *r.stop) c = *r.stop;
        if (r.rate < 0.0 && c < *r.stop) c = *r.stop;
    }
    return c;
}

inline double evaluate_schedule(const schedule::StepPerturbation& s, double c_base,
                                double t) noexcept {
    return t < s.t_step ? c_base : c_base + s.delta;
}

inline double evaluate_schedule(const ParamSchedule& s, double c_base, double t) {
    return std::visit([&](const auto& v) { return evaluate_schedule(v, c_base, t); }, s);
}

inline std::string schedule_name(const ParamSchedule& s) {
    struct Namer {
        std::string operator()(const schedule::Constant&) const { return "constant"; }
        std::string operator()(const schedule::LinearRamp&) const { return "linear_ramp"; }
        std::string operator()(const schedule::StepPerturbation&) const { return "step"; }
    };
    return std::visit(Namer{}, s);
}

/// Right-hand side of the deterministic part.
inline double drift(double h_delayed, double t, double c_now, double kappa) noexcept {
    return -std::tanh(kappa * h_delayed) + c_now * std::cos(2.0 * std::numbers::pi * t);
}

}  // namespace mtip
