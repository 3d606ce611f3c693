#pragma once

// Independent reference implementations used by the tests. They share no code
// with the library beyond the noise stream.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mtip/core/rng.hpp"
#include "mtip/observables/section.hpp"

namespace oracle {

/// Values frozen from arbitrary-precision evaluation (mpmath, 30 digits).
inline constexpr double kNegTanh1p1 = -0.800499021760629737915;  // -tanh(1.1)
inline constexpr double kGoldenMean = 0.618033988749894848205;   // (sqrt(5) - 1) / 2
/// max - min of sin(2 pi t) + 0.5 sin(2 pi (2/7) t) over one 7-period,
/// maximized on a 1e-7 grid with numpy.
inline constexpr double kTwoToneRange = 2.9758998095023887;

/// Euler-Maruyama with the whole history kept in one array and the forcing
/// evaluated directly. Returns h at t0, t0 + dt, ..., t_end.
inline std::vector<double> naive_euler(double kappa, double tau, double eps, std::function<double(double)> c_of_t,
                                       double h0, double t0, double t_end, double dt, std::uint64_t seed = 0,
                                       std::uint64_t substream = 0) {
    const auto d = static_cast<std::size_t>(std::llround(tau / dt));
    const auto steps = static_cast<std::size_t>(std::llround((t_end - t0) / dt));
    std::vector<double> h(d + steps + 1, h0);
    mtip::GaussianStream noise(seed, substream);
    for (std::size_t n = 0; n < steps; ++n) {
        const std::size_t i = d + n;
        const double t = t0 + static_cast<double>(n) * dt;
        double next = h[i] + (-std::tanh(kappa * h[i - d]) + c_of_t(t) * std::cos(2.0 * std::numbers::pi * t)) * dt;
        if (eps > 0.0) next += eps * std::sqrt(dt) * noise();
        h[i + 1] = next;
    }
    return {h.begin() + static_cast<std::ptrdiff_t>(d), h.end()};
}

/// max - min of every window [k*s, k*s + w), by exhaustive scan.
inline std::vector<double> brute_envelope(const std::vector<double>& v, std::size_t w, std::size_t s) {
    std::vector<double> out;
    for (std::size_t a = 0; a + w <= v.size(); a += s) {
        const auto [lo, hi] = std::minmax_element(v.begin() + static_cast<std::ptrdiff_t>(a),
                                                  v.begin() + static_cast<std::ptrdiff_t>(a + w));
        out.push_back(*hi - *lo);
    }
    return out;
}

/// Points of a rigid rotation by rho turns per step on a circle.
inline mtip::StroboscopicSection rigid_rotation(double rho, std::size_t n, double radius = 1.0, double cx = 0.3,
                                                double cy = -0.2, double phase = 0.1) {
    mtip::StroboscopicSection s;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = 2.0 * std::numbers::pi * (phase + rho * static_cast<double>(k));
        s.points.push_back({cx + radius * std::cos(a), cy + radius * std::sin(a)});
    }
    return s;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
    static std::mt19937_64 gen(std::random_device{}());
    auto p = std::filesystem::temp_directory_path() / ("mtip_" + tag + "_" + std::to_string(gen() % 1000000007));
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace oracle
