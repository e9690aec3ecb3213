// povgrid/rng.hpp - deterministic random streams and seed derivation.
//
// All randomness in the project flows through Rng so that a (config, seed)
// pair reproduces runs bit-for-bit on any platform. std::mt19937_64's output
// sequence is fully specified by the standard; the distribution transforms
// below are hand-rolled because the std:: distribution algorithms are not.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "povgrid/errors.hpp"

namespace povgrid {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer (Steele/Lea/Flood constants). Bijective on 64 bits.
constexpr std::uint64_t splitmix64_mix(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Seed for sub-stream `stream` of `master`. Bit-exact contract:
//   derive_seed(s, i) = splitmix64_mix(s + (i + 1) * 0x9E3779B97F4A7C15)
// with all arithmetic mod 2^64. Distinct streams are guaranteed distinct
// because (i + 1) * gamma is injective mod 2^64 and the mix is a bijection.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64_mix(master + (stream + 1) * kGoldenGamma);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random mantissa bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Unbiased integer in [0, n) via mask rejection.
    std::uint64_t uniform_int(std::uint64_t n) {
        if (n == 0) throw DomainError("uniform_int: n must be positive");
        std::uint64_t mask = ~std::uint64_t{0};
        int bits = 64;
        while (bits > 1 && (n - 1) >> (bits - 1) == 0) {
            --bits;
            mask >>= 1;
        }
        for (;;) {
            std::uint64_t r = next_u64() & mask;
            if (r < n) return r;
        }
    }

    // Index draw from a normalized categorical distribution.
    int categorical(const std::vector<double>& probs) {
        double u = uniform01();
        double acc = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            acc += probs[i];
            if (u < acc) return static_cast<int>(i);
        }
        return static_cast<int>(probs.size()) - 1;  // rounding overshoot
    }

    // Standard normal via Box-Muller; consumes exactly two draws per call.
    double normal() {
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace povgrid
