#pragma once

// Deterministic random source shared by every stochastic step of a session.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. The standard <random> distributions are implementation-defined,
// so the mappings to coins, uniforms and bounded integers are done here to
// keep transcripts identical across toolchains.

#include <cstdint>
#include <random>

namespace bb84 {

/// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of session `index` under `master`. Distinct indices give distinct
/// seeds because the golden-ratio step is odd and mix64 is a bijection.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(master + 0x9e3779b97f4a7c15ULL * (index + 1));
}

class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Fair coin. Consumes one engine word per 64 coins.
    bool coin() {
        if (bits_left_ == 0) {
            bit_buffer_ = engine_();
            bits_left_ = 64;
        }
        const bool b = (bit_buffer_ & 1U) != 0;
        bit_buffer_ >>= 1;
        --bits_left_;
        return b;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// True with probability p (clamped to [0, 1]).
    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform() < p;
    }

    /// Uniform integer in [0, bound). `bound` must be nonzero.
    std::uint64_t below(std::uint64_t bound) {
        // Rejection on the top multiple of bound keeps the draw unbiased.
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t bit_buffer_ = 0;
    int bits_left_ = 0;
};

} // namespace bb84
