#pragma once

// Test-only reference computations. Nothing here calls into the library's
// measurement, hashing or elimination code; each oracle recomputes from
// explicit amplitude vectors, dense matrices or enumeration.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

using Vec2 = std::array<double, 2>;

inline Vec2 ray(double theta) { return {std::cos(theta), std::sin(theta)}; }

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

inline double prob(const Vec2& state, const Vec2& outcome) {
    const double d = dot(state, outcome);
    return d * d;
}

/// Signal alphabet: {basis, bit} -> amplitude vector, per the fixed coding.
inline Vec2 signal(int basis, int bit) {
    constexpr double pi = std::numbers::pi;
    static const double angles[2][2] = {{0.0, pi / 2}, {pi / 4, 3 * pi / 4}};
    return ray(angles[basis][bit]);
}

enum class Rule { MaxPosterior, ResendAncilla };

/// Exact induced sifted QBER of a single ancilla-basis measurement followed
/// by resending. Enumerates Alice's 4 states x Eve's 2 outcomes; Bob measures
/// in Alice's basis (only sifted positions count).
inline double physical_attack_qber(double ancilla, Rule rule) {
    const Vec2 outcomes[2] = {ray(ancilla), ray(ancilla + std::numbers::pi / 2)};
    // Candidate states in reference-list order: |0>, |pi/2>, |pi/4>, |3pi/4>.
    const Vec2 cands[4] = {signal(0, 0), signal(0, 1), signal(1, 0), signal(1, 1)};
    Vec2 resend[2];
    for (int o = 0; o < 2; ++o) {
        if (rule == Rule::ResendAncilla) {
            resend[o] = outcomes[o];
            continue;
        }
        int best = 0;
        for (int k = 1; k < 4; ++k) {
            if (prob(cands[k], outcomes[o]) > prob(cands[best], outcomes[o]) + 1e-12) best = k;
        }
        resend[o] = cands[best];
    }
    double qber = 0.0;
    for (int basis = 0; basis < 2; ++basis) {
        for (int bit = 0; bit < 2; ++bit) {
            const Vec2 sent = signal(basis, bit);
            const Vec2 wrong = signal(basis, 1 - bit);
            for (int o = 0; o < 2; ++o) qber += 0.25 * prob(sent, outcomes[o]) * prob(resend[o], wrong);
        }
    }
    return qber;
}

/// Intercept/resend: Eve picks a basis, Bob measures in Alice's basis.
/// Returns {sifted QBER, Eve's sifted-bit accuracy}.
struct InterceptResendExact {
    double qber;
    double eve_accuracy;
};

inline InterceptResendExact intercept_resend_exact() {
    double qber = 0.0;
    double acc = 0.0;
    for (int basis = 0; basis < 2; ++basis) {
        for (int bit = 0; bit < 2; ++bit) {
            const Vec2 sent = signal(basis, bit);
            for (int eve_basis = 0; eve_basis < 2; ++eve_basis) {
                for (int eve_bit = 0; eve_bit < 2; ++eve_bit) {
                    const double p = 0.25 * 0.5 * prob(sent, signal(eve_basis, eve_bit));
                    const Vec2 resent = signal(eve_basis, eve_bit);
                    qber += p * prob(resent, signal(basis, 1 - bit));
                    acc += p * (eve_bit == bit ? 1.0 : 0.0);
                }
            }
        }
    }
    return {qber, acc};
}

inline double binomial_sigma(double p, std::size_t n) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

/// Dense Toeplitz evaluation: K_i = XOR_j seed[i - j + n - 1] & w[j].
inline std::vector<std::uint8_t> toeplitz_dense(const std::vector<std::uint8_t>& seed,
                                                const std::vector<std::uint8_t>& w, std::size_t r) {
    const std::size_t n = w.size();
    std::vector<std::uint8_t> k(r, 0);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < n; ++j) k[i] ^= seed[i + n - 1 - j] & w[j];
    }
    return k;
}

/// Rank over GF(2) of a dense row-major 0/1 matrix by plain elimination.
inline std::size_t gf2_rank(std::vector<std::vector<std::uint8_t>> m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size();
    const std::size_t cols = m[0].size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && !m[piv][c]) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r != rank && m[r][c]) {
                for (std::size_t k = 0; k < cols; ++k) m[r][k] ^= m[rank][k];
            }
        }
        ++rank;
    }
    return rank;
}

} // namespace oracle
