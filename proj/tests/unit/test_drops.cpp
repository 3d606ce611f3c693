#include <catch_amalgamated.hpp>

#include <random>

#include "mtip/experiments/drops.hpp"

using namespace mtip;
using namespace mtip::experiments;

namespace {

AmplitudeSeries envelope(const std::vector<double>& amps, double c0 = 2.0, double dc = 1e-3) {
    AmplitudeSeries a;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        a.centers.push_back(100.0 * static_cast<double>(i));
        a.c_values.push_back(c0 + dc * static_cast<double>(i));
    }
    a.amps = amps;
    return a;
}

std::vector<double> staircase(std::mt19937_64& gen, double jitter) {
    std::normal_distribution<double> nd(0.0, jitter);
    std::vector<double> v;
    for (int i = 0; i < 300; ++i) {
        const double level = i < 100 ? 4.0 : i < 200 ? 3.2 : 0.5;
        v.push_back(level + nd(gen));
    }
    return v;
}

}  // namespace

TEST_CASE("monotone noiseless envelope has no drops") {
    std::vector<double> v;
    for (int i = 0; i < 200; ++i) v.push_back(1.0 + 1e-3 * i);
    CHECK(detect_drops(envelope(v)).empty());
    std::vector<double> w;
    for (int i = 0; i < 200; ++i) w.push_back(3.0 - 1e-3 * i);
    CHECK(detect_drops(envelope(w)).empty());
}

TEST_CASE("staircase yields two ordered drops") {
    std::mt19937_64 gen(31);
    const auto ev = detect_drops(envelope(staircase(gen, 0.01)));
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].size == Catch::Approx(0.8).margin(0.05));
    CHECK(ev[1].size == Catch::Approx(2.7).margin(0.05));
    CHECK(ev[0].c < ev[1].c);
    CHECK(ev[0].c == Catch::Approx(2.0995).margin(2e-3));
    CHECK(ev[1].c == Catch::Approx(2.1995).margin(2e-3));
    CHECK(detect_rises(envelope(staircase(gen, 0.01))).empty());
}

TEST_CASE("rises mirror drops") {
    std::mt19937_64 gen(32);
    auto v = staircase(gen, 0.01);
    std::reverse(v.begin(), v.end());
    const auto ev = detect_rises(envelope(v));
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].size == Catch::Approx(2.7).margin(0.05));
    CHECK(ev[1].size == Catch::Approx(0.8).margin(0.05));
    for (const auto& e : ev) CHECK(e.size > 0);
}

TEST_CASE("jitter-only envelopes rarely produce false drops") {
    std::mt19937_64 gen(33);
    std::normal_distribution<double> nd(0.0, 0.01);
    int empty = 0;
    for (int draw = 0; draw < 100; ++draw) {
        std::vector<double> v(300);
        for (auto& x : v) x = 2.0 + nd(gen);
        empty += detect_drops(envelope(v)).empty();
    }
    CHECK(empty >= 95);
}

TEST_CASE("gradual drop spread over several windows is one event") {
    std::vector<double> v;
    for (int i = 0; i < 100; ++i) v.push_back(2.0 + 1e-4 * (i % 3));
    for (int i = 0; i < 8; ++i) v.push_back(2.0 - 0.012 * (i + 1));
    for (int i = 0; i < 100; ++i) v.push_back(1.904 + 1e-4 * (i % 3));
    const auto ev = detect_drops(envelope(v));
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].size == Catch::Approx(0.096).margin(0.01));
}

TEST_CASE("relative floor suppresses small wiggles") {
    std::vector<double> v(300, 2.0);
    v[100] = v[101] = v[102] = 1.99;  // 0.5% dip
    for (int i = 200; i < 300; ++i) v[i] = 1.0;
    CHECK(detect_drops(envelope(v)).size() == 2);
    DropOptions opt;
    opt.min_relative = 0.02;
    const auto ev = detect_drops(envelope(v), opt);
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].size == Catch::Approx(1.0));
}

TEST_CASE("untagged envelopes are rejected") {
    AmplitudeSeries a;
    a.amps = {1, 2, 3};
    CHECK_THROWS_AS(detect_drops(a), InvalidArgument);
    CHECK(detect_drops(envelope({1.0})).empty());
}
