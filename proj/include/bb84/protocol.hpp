#pragma once

// BB84 session: preparation, channel transit through an eavesdropper,
// measurement, sifting and parity verification with bit discard.
//
// Basis reconciliation and parity announcements travel over an
// authenticated, error-free public channel and are not simulated beyond
// their content.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bb84/adversary.hpp"
#include "bb84/errors.hpp"
#include "bb84/quantum.hpp"
#include "bb84/random.hpp"

namespace bb84 {

struct PreparedPulse {
    Bit bit;
    Basis basis;
    QuantumState state;
    friend bool operator==(const PreparedPulse&, const PreparedPulse&) = default;
};

inline std::vector<PreparedPulse> prepare_pulses(std::size_t n, RandomSource& rng) {
    if (n == 0) throw InvalidConfig("need at least one pulse");
    std::vector<PreparedPulse> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Bit bit = rng.coin() ? 1 : 0;
        const Basis basis = rng.coin() ? Basis::Diagonal : Basis::Rectilinear;
        out.push_back({bit, basis, encode(bit, basis)});
    }
    return out;
}

struct ChannelOutput {
    std::optional<QuantumState> received; // empty when the pulse is lost
    EveRecord eve;
};

inline void check_efficiency(double efficiency) {
    if (!(efficiency > 0.0 && efficiency <= 1.0)) throw InvalidConfig("efficiency must lie in (0, 1]");
}

/// Eve acts first; the surviving state is then lost with probability 1 - efficiency.
inline ChannelOutput transmit(const QuantumState& pulse, const EveStrategy& adversary, double efficiency,
                              RandomSource& rng) {
    check_efficiency(efficiency);
    Interception eve = intercept(adversary, pulse, rng);
    ChannelOutput out{eve.outgoing, eve.record};
    if (efficiency < 1.0 && !rng.bernoulli(efficiency)) out.received.reset();
    return out;
}

struct PulseRecord {
    std::size_t index = 0;
    Bit alice_bit = 0;
    Basis alice_basis = Basis::Rectilinear;
    QuantumState sent_state;
    std::optional<QuantumState> channel_state;
    Basis bob_basis = Basis::Rectilinear;
    std::optional<Bit> bob_bit;
    bool lost = false;
    EveRecord eve;

    friend bool operator==(const PulseRecord&, const PulseRecord&) = default;
};

struct SiftedKey {
    Bits bits;
    std::vector<std::size_t> source_indices;

    std::size_t size() const noexcept { return bits.size(); }
    friend bool operator==(const SiftedKey&, const SiftedKey&) = default;
};

struct SiftResult {
    SiftedKey alice;
    SiftedKey bob;
};

/// Keeps received pulses whose bases matched.
inline SiftResult sift(std::span<const PulseRecord> pulses) {
    SiftResult out;
    for (const auto& p : pulses) {
        if (p.lost || !p.bob_bit || p.alice_basis != p.bob_basis) continue;
        out.alice.bits.push_back(p.alice_bit);
        out.alice.source_indices.push_back(p.index);
        out.bob.bits.push_back(*p.bob_bit);
        out.bob.source_indices.push_back(p.index);
    }
    return out;
}

struct ParityRound {
    std::vector<std::size_t> subset; // positions in the key as it stood at this round
    Bit alice_parity = 0;
    Bit bob_parity = 0;
    std::size_t discarded_position = 0;

    bool mismatch() const noexcept { return alice_parity != bob_parity; }
    friend bool operator==(const ParityRound&, const ParityRound&) = default;
};

struct ParityOutcome {
    bool detected = false;
    Bits alice;
    Bits bob;
    /// Sifted-key positions that survived every discard, in order.
    std::vector<std::size_t> kept_positions;
    std::vector<ParityRound> rounds;
};

/// k rounds of random-subset parity comparison. Each round samples a uniform
/// nonempty subset (per-position fair coin, resampled if empty), compares
/// parities, and discards the subset's lowest position from both keys.
/// k = 0 performs no rounds.
inline ParityOutcome parity_verify(const SiftedKey& alice, const SiftedKey& bob, std::size_t k, RandomSource& rng) {
    if (alice.size() != bob.size()) throw LengthMismatch("sifted keys differ in length");
    if (k > 0 && alice.size() <= k)
        throw KeyTooShort("sifted key of length " + std::to_string(alice.size()) + " cannot absorb " +
                          std::to_string(k) + " parity rounds");

    ParityOutcome out;
    out.alice = alice.bits;
    out.bob = bob.bits;
    out.kept_positions.resize(alice.size());
    for (std::size_t i = 0; i < alice.size(); ++i) out.kept_positions[i] = i;
    out.rounds.reserve(k);

    for (std::size_t round = 0; round < k; ++round) {
        const std::size_t len = out.alice.size();
        ParityRound pr;
        do {
            pr.subset.clear();
            for (std::size_t i = 0; i < len; ++i) {
                if (rng.coin()) pr.subset.push_back(i);
            }
        } while (pr.subset.empty());
        for (std::size_t i : pr.subset) {
            pr.alice_parity ^= out.alice[i];
            pr.bob_parity ^= out.bob[i];
        }
        pr.discarded_position = pr.subset.front();
        const auto d = static_cast<std::ptrdiff_t>(pr.discarded_position);
        out.alice.erase(out.alice.begin() + d);
        out.bob.erase(out.bob.begin() + d);
        out.kept_positions.erase(out.kept_positions.begin() + d);
        out.detected = out.detected || pr.mismatch();
        out.rounds.push_back(std::move(pr));
    }
    return out;
}

struct SessionConfig {
    std::size_t n_pulses = 1000;
    double efficiency = 1.0;
    std::size_t parity_rounds = 0;
    /// Flip one uniformly chosen sifted bit of Bob's key before verification.
    bool force_difference = false;

    void validate() const {
        if (n_pulses == 0) throw InvalidConfig("need at least one pulse");
        check_efficiency(efficiency);
    }
};

struct SessionTranscript {
    EveKind adversary = EveKind::NoEve;
    std::vector<PulseRecord> pulses;
    SiftedKey sifted_alice;
    SiftedKey sifted_bob;
    std::optional<std::size_t> forced_flip; // sifted position flipped in Bob's key
    std::vector<ParityRound> parity_rounds;
    bool detected = false;
    /// Alice's key after parity discards; present only when not detected.
    std::optional<Bits> reconciled_key;
    /// Sifted positions that make up reconciled_key.
    std::vector<std::size_t> reconciled_positions;
    /// Eve's bit guesses aligned to sifted positions (0 where she has none);
    /// absent when there is no eavesdropper.
    std::optional<Bits> eve_bits;
    /// 1 where Eve knows the sifted bit with certainty after reconciliation.
    std::optional<Bits> eve_known;

    std::size_t sifted_length() const noexcept { return sifted_alice.size(); }

    /// Mismatching sifted positions before parity verification.
    std::size_t sifted_errors() const noexcept {
        std::size_t e = 0;
        for (std::size_t i = 0; i < sifted_alice.size(); ++i) e += sifted_alice.bits[i] != sifted_bob.bits[i];
        return e;
    }

    double qber() const noexcept {
        return sifted_alice.size() == 0 ? 0.0
                                        : static_cast<double>(sifted_errors()) / static_cast<double>(sifted_length());
    }

    /// Fraction of sifted positions where Eve's guess equals Alice's bit.
    std::optional<double> eve_accuracy() const {
        if (!eve_bits || sifted_alice.size() == 0) return std::nullopt;
        std::size_t hits = 0;
        for (std::size_t i = 0; i < sifted_alice.size(); ++i) hits += (*eve_bits)[i] == sifted_alice.bits[i];
        return static_cast<double>(hits) / static_cast<double>(sifted_length());
    }

    friend bool operator==(const SessionTranscript&, const SessionTranscript&) = default;
};

/// prepare -> transmit through the adversary -> measure -> sift -> parity_verify.
inline SessionTranscript run_session(const SessionConfig& config, const EveStrategy& adversary, RandomSource& rng) {
    config.validate();
    SessionTranscript t;
    t.adversary = adversary.kind();

    const auto prepared = prepare_pulses(config.n_pulses, rng);
    t.pulses.reserve(prepared.size());
    for (std::size_t i = 0; i < prepared.size(); ++i) {
        const auto& p = prepared[i];
        PulseRecord rec;
        rec.index = i;
        rec.alice_bit = p.bit;
        rec.alice_basis = p.basis;
        rec.sent_state = p.state;
        ChannelOutput ch = transmit(p.state, adversary, config.efficiency, rng);
        rec.channel_state = ch.received;
        rec.eve = ch.eve;
        rec.lost = !ch.received.has_value();
        rec.bob_basis = rng.coin() ? Basis::Diagonal : Basis::Rectilinear;
        if (!rec.lost) rec.bob_bit = measure(*ch.received, rec.bob_basis, rng).bit;
        t.pulses.push_back(rec);
    }

    auto sifted = sift(t.pulses);
    t.sifted_alice = std::move(sifted.alice);
    t.sifted_bob = std::move(sifted.bob);

    if (adversary.kind() != EveKind::NoEve) {
        Bits guesses(t.sifted_length(), 0);
        Bits known(t.sifted_length(), 0);
        for (std::size_t i = 0; i < t.sifted_length(); ++i) {
            const PulseRecord& p = t.pulses[t.sifted_alice.source_indices[i]];
            if (p.eve.guessed_bit) guesses[i] = *p.eve.guessed_bit;
            known[i] = p.eve.knows_bit(p.alice_basis) ? 1 : 0;
        }
        t.eve_bits = std::move(guesses);
        t.eve_known = std::move(known);
    }

    if (config.force_difference) {
        if (t.sifted_length() == 0) throw KeyTooShort("cannot force a difference into an empty sifted key");
        const auto pos = static_cast<std::size_t>(rng.below(t.sifted_length()));
        t.sifted_bob.bits[pos] ^= 1;
        t.forced_flip = pos;
    }

    ParityOutcome po = parity_verify(t.sifted_alice, t.sifted_bob, config.parity_rounds, rng);
    t.parity_rounds = std::move(po.rounds);
    t.detected = po.detected;
    if (!t.detected) {
        t.reconciled_key = std::move(po.alice);
        t.reconciled_positions = std::move(po.kept_positions);
    }
    return t;
}

} // namespace bb84
