#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace odds {

/// One SplitMix64 step (Vigna's published constants). Advances x in place and
/// returns the mixed output word.
constexpr std::uint64_t splitmix64(std::uint64_t& x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seeded, stream-splittable PRNG: xoshiro256++ state derived from
/// (seed, stream_id) through SplitMix64.
///
/// The same pair produces the same byte sequence on every platform; distinct
/// stream ids derived from one seed start from unrelated generator states, so
/// replicates can run in parallel without shared state.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept
        : seed_(seed), stream_(stream_id) {
        std::uint64_t x = seed;
        std::uint64_t y = stream_id;
        std::uint64_t chain = splitmix64(x) ^ (splitmix64(y) * 0xBF58476D1CE4E5B9ULL);
        for (auto& w : state_) w = splitmix64(chain);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_; }

    /// Child stream for replicate `child`; deterministic in (seed, stream, child).
    RngStream substream(std::uint64_t child) const noexcept {
        std::uint64_t y = stream_;
        std::uint64_t c = child + 1;
        return RngStream(seed_, splitmix64(y) ^ (splitmix64(c) * 0x94D049BB133111EBULL));
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0,1), 53-bit resolution.
    double uniform01() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) noexcept { return a + (b - a) * uniform01(); }

    /// Standard normal via Box-Muller (two uniforms per draw, no cached state).
    double normal() noexcept {
        const double u1 = 1.0 - uniform01();  // (0,1], keeps log finite
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    /// Integer in [0, bound) by 128-bit multiply-shift; bound must be > 0.
    std::uint64_t below(std::uint64_t bound) noexcept {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace odds
