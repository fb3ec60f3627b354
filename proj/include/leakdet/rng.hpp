#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

// Deterministic random number generation for scenario synthesis.
//
// Every noise sample in a simulation is drawn from a stream derived by
// hashing (scenario seed, source slot, frame start time). Streams are
// therefore independent of evaluation order: frame k of source j is
// bit-identical whether frames are generated sequentially, in parallel,
// or re-generated in isolation.

namespace leakdet {

inline std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Order-sensitive mixing of a word into a hash state.
inline std::uint64_t hash_mix(std::uint64_t h, std::uint64_t word) noexcept {
    h ^= word + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    std::uint64_t s = h;
    return splitmix64_next(s);
}

inline std::uint64_t bits_of(double x) noexcept {
    return std::bit_cast<std::uint64_t>(x);
}

// xoshiro256** 1.0 (Blackman & Vigna), seeded through splitmix64.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept {
        std::uint64_t x = seed;
        for (auto& w : state_) w = splitmix64_next(x);
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; second variate cached.
    double gaussian() noexcept {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925287 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) noexcept {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t state_[4]{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Stream for one (scenario seed, stream tag, frame time) triple.
inline Rng make_stream(std::uint64_t seed, std::uint64_t tag, double t0) noexcept {
    std::uint64_t h = hash_mix(seed, tag);
    h = hash_mix(h, bits_of(t0));
    return Rng(h);
}

} // namespace leakdet
