#pragma once

// Privacy amplification with binary Toeplitz hashing.
//
// A descriptor with seed bits s_0 .. s_{n+r-2} defines the r x n matrix
// T[i][j] = s_{i - j + n - 1}; the final key is K = T W over GF(2).
// Evaluation works on 64-bit packed words: row i of T, read right to left,
// is the seed window starting at bit i.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bb84/errors.hpp"
#include "bb84/protocol.hpp"
#include "bb84/quantum.hpp"
#include "bb84/random.hpp"

namespace bb84 {

struct PrivacyParams {
    std::size_t n = 0; // reconciled key length
    std::size_t t = 0; // assumed Eve information, bits
    std::size_t s = 0; // security margin, bits

    /// Final key length n - t - s; only meaningful after validate().
    std::size_t r() const noexcept { return n - t - s; }

    void validate() const {
        const auto msg = [&] {
            return "n=" + std::to_string(n) + " t=" + std::to_string(t) + " s=" + std::to_string(s);
        };
        if (t >= n) throw InvalidParams("need t < n (" + msg() + ")");
        if (s == 0 || s >= n - t) throw InvalidParams("need 0 < s < n - t (" + msg() + ")");
    }
};

enum class HashFamily : std::uint8_t { ToeplitzBinary };

struct HashDescriptor {
    HashFamily family = HashFamily::ToeplitzBinary;
    std::size_t n = 0;
    std::size_t r = 0;
    Bits seed; // n + r - 1 bits

    friend bool operator==(const HashDescriptor&, const HashDescriptor&) = default;
};

namespace detail {

using Words = std::vector<std::uint64_t>;

inline Words pack(std::span<const Bit> bits) {
    Words w((bits.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) w[i / 64] |= std::uint64_t{1} << (i % 64);
    }
    return w;
}

/// Bits [start, start + len) of `src` as packed words, zero beyond len.
inline void window(const Words& src, std::size_t start, std::size_t len, Words& out) {
    const std::size_t nw = (len + 63) / 64;
    out.assign(nw, 0);
    const std::size_t w0 = start / 64;
    const unsigned b = static_cast<unsigned>(start % 64);
    for (std::size_t k = 0; k < nw; ++k) {
        std::uint64_t lo = w0 + k < src.size() ? src[w0 + k] : 0;
        std::uint64_t hi = w0 + k + 1 < src.size() ? src[w0 + k + 1] : 0;
        out[k] = b == 0 ? lo : (lo >> b) | (hi << (64 - b));
    }
    if (len % 64 != 0) out[nw - 1] &= (std::uint64_t{1} << (len % 64)) - 1;
}

/// Rank over GF(2) of a set of packed vectors of width `width` bits.
/// Stops early once the rank reaches `width`.
class Gf2Basis {
public:
    explicit Gf2Basis(std::size_t width) : width_(width), pivots_(width) {}

    void insert(Words v) {
        if (rank_ == width_) return;
        for (std::size_t w = v.size(); w-- > 0;) {
            while (v[w] != 0) {
                const std::size_t bit = w * 64 + (63 - static_cast<std::size_t>(std::countl_zero(v[w])));
                Words& p = pivots_[bit];
                if (p.empty()) {
                    p = std::move(v);
                    ++rank_;
                    return;
                }
                for (std::size_t k = 0; k <= w; ++k) v[k] ^= p[k];
            }
        }
    }

    std::size_t rank() const noexcept { return rank_; }
    bool full() const noexcept { return rank_ == width_; }

private:
    std::size_t width_;
    std::size_t rank_ = 0;
    std::vector<Words> pivots_;
};

} // namespace detail

inline HashDescriptor sample_hash(const PrivacyParams& params, RandomSource& rng) {
    params.validate();
    HashDescriptor h;
    h.n = params.n;
    h.r = params.r();
    h.seed.resize(h.n + h.r - 1);
    for (auto& b : h.seed) b = rng.coin() ? 1 : 0;
    return h;
}

/// K = G(W). Linear over XOR.
inline Bits compress(std::span<const Bit> key, const HashDescriptor& hash) {
    if (key.size() != hash.n)
        throw LengthMismatch("key has " + std::to_string(key.size()) + " bits, hash expects " +
                             std::to_string(hash.n));
    if (hash.seed.size() != hash.n + hash.r - 1) throw InvalidParams("hash seed has the wrong length");

    Bits reversed(key.rbegin(), key.rend());
    const detail::Words w = detail::pack(reversed);
    const detail::Words seed = detail::pack(hash.seed);

    Bits out(hash.r, 0);
    detail::Words row;
    for (std::size_t i = 0; i < hash.r; ++i) {
        detail::window(seed, i, hash.n, row);
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < row.size(); ++k) acc ^= row[k] & w[k];
        out[i] = static_cast<Bit>(std::popcount(acc) & 1);
    }
    return out;
}

/// Number of independent parities of K Eve can compute exactly: r minus the
/// GF(2) rank of the columns of T at the positions she does not know.
/// `known[j]` is nonzero where Eve knows key bit j with certainty.
inline std::size_t eve_known_parities(const HashDescriptor& hash, std::span<const Bit> known) {
    if (known.size() != hash.n) throw LengthMismatch("knowledge mask length differs from hash input length");
    const detail::Words seed = detail::pack(hash.seed);
    detail::Gf2Basis basis(hash.r);
    detail::Words col;
    for (std::size_t j = 0; j < hash.n && !basis.full(); ++j) {
        if (known[j]) continue;
        detail::window(seed, hash.n - 1 - j, hash.r, col);
        basis.insert(col);
    }
    return hash.r - basis.rank();
}

namespace detail {

struct EveView {
    std::span<const Bit> key;   // first n reconciled bits of Alice's key
    Bits guess;                 // Eve's guesses at the same positions
    Bits known;
};

inline EveView eve_view(const SessionTranscript& t, std::size_t n) {
    if (!t.eve_bits || !t.eve_known) throw MissingEveBits("transcript carries no eavesdropper guesses");
    const Bits& key = *t.reconciled_key;
    if (key.size() < n)
        throw LengthMismatch("reconciled key has " + std::to_string(key.size()) + " bits, need " +
                             std::to_string(n));
    EveView v{std::span<const Bit>(key.data(), n), Bits(n), Bits(n)};
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t pos = t.reconciled_positions[j];
        v.guess[j] = (*t.eve_bits)[pos];
        v.known[j] = (*t.eve_known)[pos];
    }
    return v;
}

} // namespace detail

/// Per-bit agreement advantage of Eve's best linear guess of K for one
/// session: she predicts the d parities she can compute exactly and guesses
/// the remaining r - d coordinates at chance, so the advantage is d / (2r).
/// Requires a reconciled key of at least hash.n bits.
inline double eve_advantage(const SessionTranscript& t, const HashDescriptor& hash) {
    if (t.adversary == EveKind::NoEve) return 0.0;
    if (!t.reconciled_key) throw KeyTooShort("session was aborted by parity verification");
    const auto view = detail::eve_view(t, hash.n);
    const std::size_t d = eve_known_parities(hash, view.known);
    return 0.5 * static_cast<double>(d) / static_cast<double>(hash.r);
}

/// Fraction of final-key bits where G(Eve's guessed key) equals K.
inline double hashed_guess_agreement(const SessionTranscript& t, const HashDescriptor& hash) {
    if (!t.reconciled_key) throw KeyTooShort("session was aborted by parity verification");
    const auto view = detail::eve_view(t, hash.n);
    const Bits k = compress(view.key, hash);
    const Bits g = compress(view.guess, hash);
    std::size_t same = 0;
    for (std::size_t i = 0; i < k.size(); ++i) same += k[i] == g[i];
    return static_cast<double>(same) / static_cast<double>(k.size());
}

/// Mean of eve_advantage over the transcripts that produced a key, each
/// compressed with a freshly sampled descriptor. Eavesdropper-free
/// transcripts contribute 0; aborted ones are skipped. Result in [0, 0.5].
inline double eve_residual_information(std::span<const SessionTranscript> transcripts, const PrivacyParams& params,
                                       RandomSource& rng) {
    params.validate();
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& t : transcripts) {
        if (t.adversary == EveKind::NoEve) {
            ++count;
            continue;
        }
        if (!t.eve_bits || !t.eve_known) throw MissingEveBits("transcript carries no eavesdropper guesses");
        if (!t.reconciled_key) continue;
        const HashDescriptor h = sample_hash(params, rng);
        sum += eve_advantage(t, h);
        ++count;
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

} // namespace bb84
