#pragma once

#include <cmath>
#include <cstdint>

namespace crlink {

// splitmix64 finalizer (Vigna, public domain). Used to expand seeds.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Derive an independent stream seed from (seed, stream). Every public
/// entry point that consumes randomness takes an explicit seed; callers
/// wanting several independent streams derive them through this.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0xd1342543de82ef95ull * (stream + 1));
    splitmix64_next(s);
    return splitmix64_next(s);
}

/// xoshiro256++ (Blackman/Vigna, public domain), seeded via splitmix64.
/// Self-contained so that published numbers are reproducible from
/// (seed, sample count) independent of the standard library in use.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
        return Rng(derive_seed(seed, stream_id));
    }

    std::uint64_t next() {
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

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Exponential with the given mean via inverse CDF. Returns 0 with
    /// probability 2^-53; samplers that divide by the result must guard.
    double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
};

}  // namespace crlink
