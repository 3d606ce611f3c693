#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <set>

#include "mtip/core/integrator.hpp"
#include "mtip/observables/section.hpp"

using namespace mtip;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

TimeSeries sampled(double t_end, double dt, auto f, double t0 = 0.0) {
    TimeSeries ts;
    ts.t0 = t0;
    ts.dt_sample = dt;
    const auto n = static_cast<std::size_t>(std::llround((t_end - t0) / dt)) + 1;
    for (std::size_t i = 0; i < n; ++i) ts.values.push_back(f(t0 + static_cast<double>(i) * dt));
    return ts;
}

}  // namespace

TEST_CASE("cosine section sits at h = 1") {
    const auto s = stroboscopic(sampled(50, 1e-3, [](double t) { return std::cos(kTwoPi * t); }), 0.953);
    REQUIRE(s.size() == 50);
    CHECK(s.t_start == Catch::Approx(1.0));
    for (const auto& p : s.points) CHECK(std::abs(p.h - 1.0) < 1e-9);
}

TEST_CASE("constant series gives identical points") {
    const auto s = stroboscopic(sampled(20, 1e-2, [](double) { return -0.4; }), 0.5);
    for (const auto& p : s.points) {
        CHECK(p.h == -0.4);
        CHECK(p.h_delayed == -0.4);
    }
}

TEST_CASE("7-periodic signal cycles through 7 distinct points") {
    auto f = [](double t) { return std::sin(kTwoPi * 2.0 / 7.0 * t) + std::sin(kTwoPi * t); };
    const auto s = stroboscopic(sampled(100, 1e-3, f), 0.953);
    std::set<std::pair<long long, long long>> distinct;
    for (const auto& p : s.points) distinct.insert({std::llround(p.h * 1e6), std::llround(p.h_delayed * 1e6)});
    CHECK(distinct.size() == 7);
    for (std::size_t i = 7; i < s.size(); ++i) CHECK(distance(s.points[i], s.points[i - 7]) < 1e-9);
}

TEST_CASE("delayed coordinate is read from stored samples") {
    const auto ts = sampled(10, 0.01, [](double t) { return t; }, 0.5);
    const auto s = stroboscopic(ts, 0.25);
    REQUIRE(s.size() == 10);
    CHECK(s.t_start == Catch::Approx(1.0));
    for (std::size_t k = 0; k < s.size(); ++k) {
        CHECK(s.points[k].h == Catch::Approx(1.0 + k));
        CHECK(s.points[k].h_delayed == Catch::Approx(0.75 + k));
    }
}

TEST_CASE("incommensurate sampling is rejected") {
    CHECK_THROWS_AS(stroboscopic(sampled(10, 0.3, [](double) { return 0.0; }), 0.9), IncommensurateSampling);
    CHECK_THROWS_AS(stroboscopic(sampled(10, 0.01, [](double) { return 0.0; }), 0.955), IncommensurateSampling);
    CHECK_THROWS_AS(stroboscopic(sampled(10.005, 0.01, [](double) { return 0.0; }, 0.005), 0.5),
                    IncommensurateSampling);
    CHECK_THROWS_AS(stroboscopic(sampled(0.3, 0.01, [](double) { return 0.0; }), 0.5), SeriesTooShort);
}

TEST_CASE("streaming section equals the stored-series section") {
    const ModelParams p{11.0, 0.953, 2.966, 0.0};
    IntegratorConfig cfg;
    cfg.t_end = 300;
    SectionAccumulator acc;
    integrate_stream(p, schedule::Constant{}, ConstantHistory{1.0}, cfg, acc);
    const auto stored = stroboscopic(integrate(p, schedule::Constant{}, ConstantHistory{1.0}, cfg), 0.953);
    const auto streamed = acc.take();
    // The stream also sees t = 0, where the delayed value is the history.
    REQUIRE(streamed.size() == stored.size() + 1);
    for (std::size_t i = 0; i < stored.size(); ++i) {
        CHECK(streamed.points[i + 1].h == stored.points[i].h);
        CHECK(streamed.points[i + 1].h_delayed == stored.points[i].h_delayed);
    }
}
