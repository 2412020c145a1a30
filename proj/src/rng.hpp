#pragma once

// Deterministic PRNG used for corpus generation and oracle draws.
//
// SplitMix64 (Steele, Lea, Flood 2014), 64-bit state, counter-based. The
// algorithm id recorded in corpus manifests is "splitmix64-v1"; any change to
// the mixing constants or to the derived-stream scheme below must bump it.

#include <cmath>
#include <cstdint>

namespace locgate {

inline constexpr const char* kPrngId = "splitmix64-v1";

inline uint64_t splitmix64_mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return splitmix64_mix(state_);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; one value per call, two draws consumed.
    double normal() {
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    bool bernoulli(double p) { return uniform() < p; }

private:
    uint64_t state_;
};

// Stable per-trace stream derivation: seed = mix(mix(master ^ C1 + scenario) + trace).
inline uint64_t derive_seed(uint64_t master, uint64_t scenario_index, uint64_t trace_index) {
    uint64_t s = splitmix64_mix(master ^ 0xA0761D6478BD642Full) + scenario_index;
    return splitmix64_mix(splitmix64_mix(s) + trace_index);
}

// FNV-1a 64-bit, used for corpus content hashes.
class Fnv1a64 {
public:
    void update(const void* data, size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < n; ++i) {
            hash_ ^= p[i];
            hash_ *= 0x100000001B3ull;
        }
    }
    uint64_t value() const noexcept { return hash_; }

private:
    uint64_t hash_ = 0xCBF29CE484222325ull;
};

}  // namespace locgate
