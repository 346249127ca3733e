#pragma once

// Seedable, splittable random number generation.
//
// Streams are derived from a 64-bit master seed by hashing (master, tags...)
// through SplitMix64, so trial t of an experiment can be replayed in
// isolation without touching any other stream. The engine is xoshiro256**,
// and bounded draws use Lemire's multiply-shift rejection method so the
// output sequence does not depend on the standard library implementation.

#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace ustlab {

using Seed = std::uint64_t;

constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    std::uint64_t s = x;
    return splitmix64(s);
}

/// Counter-based stream derivation: the same (master, tags) always yields the
/// same seed, and distinct tag tuples give unrelated seeds.
constexpr Seed derive_seed(Seed master, std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t h = mix64(master ^ 0x5851f42d4c957f2dULL);
    for (std::uint64_t t : tags) h = mix64(h ^ mix64(t + 0x2545f4914f6cdd1dULL));
    return h;
}

class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(Seed seed = 0) noexcept { reseed(seed); }

    static Rng stream(Seed master, std::initializer_list<std::uint64_t> tags) noexcept {
        return Rng(derive_seed(master, tags));
    }

    void reseed(Seed seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = std::rotl(s_[3], 45);
        return result;
    }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept {
        unsigned __int128 product = static_cast<unsigned __int128>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(product);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                product = static_cast<unsigned __int128>((*this)()) * bound;
                low = static_cast<std::uint64_t>(product);
            }
        }
        return static_cast<std::uint64_t>(product >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    bool coin() noexcept { return ((*this)() >> 63) != 0; }

    bool bernoulli(double p) noexcept { return uniform01() < p; }

private:
    std::array<std::uint64_t, 4> s_{};
};

} // namespace ustlab
