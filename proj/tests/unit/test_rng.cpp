#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "mtip/core/rng.hpp"

using mtip::GaussianStream;

TEST_CASE("SplitMix64 matches the reference sequence") {
    mtip::SplitMix64 sm(1234567);
    CHECK(sm.next() == 6457827717110365317ULL);
    CHECK(sm.next() == 3203168211198807973ULL);
    CHECK(sm.next() == 9817491932198370423ULL);
}

TEST_CASE("xoshiro256++ matches the reference sequence") {
    auto x = mtip::Xoshiro256pp::from_state(1, 2, 3, 4);
    CHECK(x.next() == 41943041ULL);
    CHECK(x.next() == 58720359ULL);
    CHECK(x.next() == 3588806011781223ULL);
    CHECK(x.next() == 3591011842654386ULL);
}

TEST_CASE("gaussian_stream is reproducible per (seed, substream)") {
    auto a = mtip::gaussian_stream(42, 7);
    auto b = mtip::gaussian_stream(42, 7);
    for (int i = 0; i < 1000; ++i) REQUIRE(a() == b());

    auto c = mtip::gaussian_stream(42, 8);
    auto d = mtip::gaussian_stream(43, 7);
    auto e = mtip::gaussian_stream(42, 7);
    int same_c = 0, same_d = 0;
    for (int i = 0; i < 1000; ++i) {
        const double v = e();
        same_c += c() == v;
        same_d += d() == v;
    }
    CHECK(same_c == 0);
    CHECK(same_d == 0);
}

TEST_CASE("uniform draws lie in [0, 1)") {
    GaussianStream g(1, 0);
    for (int i = 0; i < 100000; ++i) {
        const double u = g.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("normal moments") {
    // n = 1e6: standard errors 1e-3 (mean), 1.4e-3 (variance), 2.4e-3 (skew), 4.9e-3 (kurtosis).
    GaussianStream g(2024, 3);
    const int n = 1000000;
    double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
    for (int i = 0; i < n; ++i) {
        const double z = g();
        m1 += z;
        m2 += z * z;
        m3 += z * z * z;
        m4 += z * z * z * z;
    }
    m1 /= n;
    m2 /= n;
    m3 /= n;
    m4 /= n;
    CHECK(std::abs(m1) < 5e-3);
    CHECK(std::abs(m2 - 1.0) < 7e-3);
    CHECK(std::abs(m3) < 1.2e-2);
    CHECK(std::abs(m4 - 3.0) < 2.5e-2);
}

TEST_CASE("substreams are uncorrelated") {
    const int n = 200000;
    for (std::uint64_t sub : {1ULL, 2ULL, 1000ULL}) {
        GaussianStream a(5, 0), b(5, sub);
        double sxy = 0;
        for (int i = 0; i < n; ++i) sxy += a() * b();
        // 5 standard errors of the sample correlation.
        CHECK(std::abs(sxy / n) < 5.0 / std::sqrt(double(n)));
    }
}

TEST_CASE("successive draws are uncorrelated") {
    GaussianStream g(11, 0);
    const int n = 200000;
    double prev = g(), s = 0;
    for (int i = 0; i < n; ++i) {
        const double z = g();
        s += prev * z;
        prev = z;
    }
    CHECK(std::abs(s / n) < 5.0 / std::sqrt(double(n)));
}
