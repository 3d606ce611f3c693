#pragma once

// Portable, reproducible normal variates.
//
// Generator: xoshiro256++ (Blackman & Vigna), state seeded from SplitMix64.
// Substreams: the SplitMix64 seed is mix64(seed) ^ mix64(substream + C), where
// mix64 is the SplitMix64 finalizer and C = 0x632BE59BD9B4E019. Since mix64 is
// a bijection, distinct substreams of one seed always get distinct states.
// Normals: Marsaglia polar method on 53-bit uniforms, pairs consumed in order.
//
// Only integer arithmetic plus std::log / std::sqrt are involved, so the
// stream is identical on every IEEE-754 platform with a correctly rounded libm.

#include <cmath>
#include <cstdint>

namespace mtip {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

private:
    std::uint64_t state_;
};

class Xoshiro256pp {
public:
    explicit constexpr Xoshiro256pp(std::uint64_t seed) noexcept {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    /// Raw state words; used to check against the reference implementation.
    static constexpr Xoshiro256pp from_state(std::uint64_t s0, std::uint64_t s1, std::uint64_t s2,
                                             std::uint64_t s3) noexcept {
        Xoshiro256pp x(0);
        x.s_[0] = s0;
        x.s_[1] = s1;
        x.s_[2] = s2;
        x.s_[3] = s3;
        return x;
    }

    constexpr std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4]{};
};

/// Stream of independent standard normal draws keyed by (seed, substream).
class GaussianStream {
public:
    GaussianStream(std::uint64_t seed, std::uint64_t substream) noexcept
        : engine_(mix64(seed) ^ mix64(substream + 0x632BE59BD9B4E019ULL)) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>(engine_.next() >> 11) * 0x1.0p-53;
    }

    double next() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    double operator()() noexcept { return next(); }

private:
    Xoshiro256pp engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline GaussianStream gaussian_stream(std::uint64_t seed, std::uint64_t substream) noexcept {
    return GaussianStream(seed, substream);
}

}  // namespace mtip
