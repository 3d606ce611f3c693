#pragma once

// Rotation numbers and p:q locking on stroboscopic sections.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mtip/core/errors.hpp"
#include "mtip/observables/section.hpp"

namespace mtip {

struct LockingRatio {
    int p = 0;
    int q = 1;

    friend bool operator==(const LockingRatio&, const LockingRatio&) = default;
};

namespace attractor {
struct FixedPoint {};
struct Locked {
    LockingRatio ratio;
};
struct Torus {
    double rotation = 0.0;
};
struct Unclassified {};
}  // namespace attractor

using AttractorVerdict =
    std::variant<attractor::FixedPoint, attractor::Locked, attractor::Torus, attractor::Unclassified>;

/// Residuals behind a verdict, kept for auditing.
struct LockingDiagnostics {
    std::size_t points_used = 0;
    double max_step = 0.0;
    int best_q = 0;
    double best_q_residual = 0.0;
    double rotation = std::numeric_limits<double>::quiet_NaN();
    bool monotone = false;
    double min_radius = 0.0;
};

struct AttractorClass {
    AttractorVerdict verdict = attractor::Unclassified{};
    LockingDiagnostics diagnostics;

    bool is_fixed_point() const noexcept { return std::holds_alternative<attractor::FixedPoint>(verdict); }
    bool is_locked() const noexcept { return std::holds_alternative<attractor::Locked>(verdict); }
    bool is_torus() const noexcept { return std::holds_alternative<attractor::Torus>(verdict); }
    bool is_unclassified() const noexcept {
        return std::holds_alternative<attractor::Unclassified>(verdict);
    }

    std::optional<LockingRatio> ratio() const {
        if (const auto* l = std::get_if<attractor::Locked>(&verdict)) return l->ratio;
        return std::nullopt;
    }

    std::string name() const {
        switch (verdict.index()) {
            case 0: return "fixed_point";
            case 1: return "locked";
            case 2: return "torus";
            default: return "unclassified";
        }
    }

    /// "locked 2:7", "torus 0.2853", ...
    std::string label() const {
        if (auto r = ratio()) return "locked " + std::to_string(r->p) + ":" + std::to_string(r->q);
        if (const auto* t = std::get_if<attractor::Torus>(&verdict))
            return "torus " + std::to_string(t->rotation);
        return name();
    }
};

struct LockingOptions {
    int q_max = 40;
    double tol = 1e-3;
    double discard_fraction = 0.25;
    std::size_t min_discard = 50;
};

/// Smallest section length that survives transient removal with 4*q_max points.
inline std::size_t min_section_points(const LockingOptions& o) {
    const auto need = static_cast<std::size_t>(4 * o.q_max);
    for (std::size_t n = need;; ++n) {
        const auto drop = std::max(o.min_discard, static_cast<std::size_t>(o.discard_fraction * n));
        if (n > drop && n - drop >= need) return n;
    }
}

struct RotationEstimate {
    double value = 0.0;
    /// Signed mean advance per step, in turns, before folding into [0, 1).
    double signed_turns = 0.0;
    bool monotone = false;
    double min_radius = 0.0;
    /// False when the angle sequence is not monotone or radii collapse.
    bool reliable = false;
};

/// Unwraps point angles about the centroid. Throws DegenerateGeometry when
/// more than 10% of the points sit within 1e-9 of the centroid.
inline RotationEstimate rotation_estimate(std::span<const SectionPoint> pts) {
    if (pts.size() < 2) throw InsufficientData("InsufficientData: rotation needs at least two points");
    double cx = 0.0, cy = 0.0;
    for (const auto& p : pts) {
        cx += p.h;
        cy += p.h_delayed;
    }
    cx /= static_cast<double>(pts.size());
    cy /= static_cast<double>(pts.size());

    std::size_t degenerate = 0;
    RotationEstimate est;
    est.min_radius = std::numeric_limits<double>::infinity();
    std::vector<double> angle(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double dx = pts[i].h - cx, dy = pts[i].h_delayed - cy;
        const double r = std::hypot(dx, dy);
        if (r < 1e-9) ++degenerate;
        est.min_radius = std::min(est.min_radius, r);
        angle[i] = std::atan2(dy, dx);
    }
    if (10 * degenerate > pts.size())
        throw DegenerateGeometry("DegenerateGeometry: section collapses onto its centroid");

    constexpr double two_pi = 2.0 * std::numbers::pi;
    double total = 0.0;
    bool all_pos = true, all_neg = true;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double step = std::remainder(angle[i] - angle[i - 1], two_pi);
        total += step;
        all_pos = all_pos && step > 0.0;
        all_neg = all_neg && step < 0.0;
    }
    est.signed_turns = total / (two_pi * static_cast<double>(pts.size() - 1));
    est.value = est.signed_turns - std::floor(est.signed_turns);
    if (est.value >= 1.0) est.value = 0.0;
    est.monotone = all_pos || all_neg;
    est.reliable = est.monotone && est.min_radius > 1e-9;
    return est;
}

inline RotationEstimate rotation_estimate(const StroboscopicSection& s) {
    return rotation_estimate(std::span<const SectionPoint>(s.points));
}

/// Mean rotation per forcing period in [0, 1).
inline double rotation_number(const StroboscopicSection& s) { return rotation_estimate(s).value; }

/// FixedPoint, Locked(p:q) for the smallest period q <= q_max, Torus when the
/// angle sequence advances monotonically, Unclassified otherwise.
inline AttractorClass detect_locking(const StroboscopicSection& section,
                                     const LockingOptions& opt = {}) {
    const std::size_t n = section.size();
    const auto need = static_cast<std::size_t>(4 * std::max(1, opt.q_max));
    const std::size_t drop =
        std::max(opt.min_discard, static_cast<std::size_t>(opt.discard_fraction * static_cast<double>(n)));
    if (n <= drop || n - drop < need)
        throw InsufficientData("InsufficientData: section has " + std::to_string(n) +
                               " points; need " + std::to_string(need) + " after transient removal");

    const std::span<const SectionPoint> pts(section.points.data() + drop, n - drop);
    AttractorClass out;
    auto& diag = out.diagnostics;
    diag.points_used = pts.size();

    for (std::size_t i = 1; i < pts.size(); ++i) diag.max_step = std::max(diag.max_step, distance(pts[i], pts[i - 1]));
    if (diag.max_step < opt.tol) {
        diag.best_q = 1;
        diag.best_q_residual = diag.max_step;
        out.verdict = attractor::FixedPoint{};
        return out;
    }

    std::optional<RotationEstimate> rot;
    try {
        rot = rotation_estimate(pts);
        diag.rotation = rot->value;
        diag.monotone = rot->monotone;
        diag.min_radius = rot->min_radius;
    } catch (const DegenerateGeometry&) {
    }

    diag.best_q_residual = std::numeric_limits<double>::infinity();
    for (int q = 2; q <= opt.q_max; ++q) {
        const auto uq = static_cast<std::size_t>(q);
        double residual = 0.0;
        for (std::size_t i = uq; i < pts.size(); ++i)
            residual = std::max(residual, distance(pts[i], pts[i - uq]));
        if (residual < diag.best_q_residual) {
            diag.best_q_residual = residual;
            diag.best_q = q;
        }
        if (residual >= opt.tol) continue;

        diag.best_q = q;
        diag.best_q_residual = residual;
        if (!rot) return out;
        const int p = static_cast<int>(std::lround(rot->value * q)) % q;
        if (p >= 1 && std::gcd(p, q) == 1) out.verdict = attractor::Locked{{p, q}};
        return out;
    }

    if (rot && rot->reliable) out.verdict = attractor::Torus{rot->value};
    return out;
}

}  // namespace mtip
