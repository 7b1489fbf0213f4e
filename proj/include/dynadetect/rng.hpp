#pragma once

#include <cstdint>
#include <initializer_list>

#include "dynadetect/stats.hpp"

namespace dynadetect {

// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Stream roles used when deriving per-trial / per-sample streams.
// Every random stream in the project is named by a (master seed, path) pair,
// so results are reproducible regardless of thread count or execution order.
enum class StreamRole : std::uint64_t {
    Noise = 0x01,
    Dynamics = 0x02,
    Queries = 0x03,
    Design = 0x04,
    Trial = 0x05,
    Outer = 0x06,
    Inner = 0x07,
};

inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(master);
    for (std::uint64_t tag : path) {
        h = mix64(h ^ (tag + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2)));
    }
    return h;
}

inline std::uint64_t role_tag(StreamRole r) { return static_cast<std::uint64_t>(r); }

// Counter-style SplitMix64 generator. Small, fast, and portable: the
// produced sequence depends only on the seed, never on the platform or
// standard library (std::normal_distribution is implementation-defined,
// which would break bit-reproducibility contracts).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform on the open interval (0,1); 53-bit resolution, never 0 or 1.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via inverse-CDF; exactly one uniform per draw.
    double normal() { return normal_quantile(uniform01()); }

    bool bernoulli(double p) { return uniform01() < p; }

    // Unbiased integer in [0, bound); rejection on the wrap-around range.
    std::uint64_t uniform_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

private:
    std::uint64_t state_;
};

} // namespace dynadetect
