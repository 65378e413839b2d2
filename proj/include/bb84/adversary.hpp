#pragma once

// Eavesdropper strategies interposed on the quantum channel.
//
//   NoEve                 pass-through.
//   InterceptResend       measure in a random conjugate basis, resend the eigenstate.
//   IndirectCopyOracle    read m = |<ancilla|psi>|^2 exactly from the state
//                         description, look it up, resend the matched state.
//   IndirectCopyPhysical  one projective measurement in {|a>, |a_perp>}, then
//                         resend per ResendRule.
//
// The oracle kind is the only one that reads the state without measuring it.

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>

#include "bb84/errors.hpp"
#include "bb84/quantum.hpp"
#include "bb84/random.hpp"

namespace bb84 {

enum class EveKind : std::uint8_t { NoEve, InterceptResend, IndirectCopyOracle, IndirectCopyPhysical };

enum class ResendRule : std::uint8_t { MaxPosterior, ResendAncilla };

inline const char* to_string(EveKind k) noexcept {
    switch (k) {
    case EveKind::NoEve: return "none";
    case EveKind::InterceptResend: return "intercept-resend";
    case EveKind::IndirectCopyOracle: return "indirect-oracle";
    case EveKind::IndirectCopyPhysical: return "indirect-physical";
    }
    return "?";
}

inline const char* to_string(ResendRule r) noexcept {
    return r == ResendRule::MaxPosterior ? "max-posterior" : "resend-ancilla";
}

inline std::optional<EveKind> parse_eve_kind(std::string_view s) {
    for (EveKind k : {EveKind::NoEve, EveKind::InterceptResend, EveKind::IndirectCopyOracle,
                      EveKind::IndirectCopyPhysical}) {
        if (s == to_string(k)) return k;
    }
    return std::nullopt;
}

inline std::optional<ResendRule> parse_resend_rule(std::string_view s) {
    for (ResendRule r : {ResendRule::MaxPosterior, ResendRule::ResendAncilla}) {
        if (s == to_string(r)) return r;
    }
    return std::nullopt;
}

/// What Eve did to one pulse.
struct EveRecord {
    bool intercepted = false;
    std::optional<Bit> guessed_bit;
    std::optional<QuantumState> guessed_state;
    QuantumState resent_state;
    /// Basis Eve measured in (intercept/resend only). Once Alice's basis is
    /// public, a matching basis means Eve's bit is certain.
    std::optional<Basis> measured_basis;
    /// Eve's guess is exact regardless of the public bases (oracle kind).
    bool exact = false;

    /// Whether Eve knows Alice's bit with certainty after basis reconciliation.
    bool knows_bit(Basis alice_basis) const noexcept {
        if (!intercepted || !guessed_bit) return false;
        return exact || (measured_basis && *measured_basis == alice_basis);
    }

    friend bool operator==(const EveRecord&, const EveRecord&) = default;
};

struct Interception {
    QuantumState outgoing;
    EveRecord record;
};

class EveStrategy {
public:
    static EveStrategy none() { return EveStrategy(EveKind::NoEve, std::nullopt, ResendRule::MaxPosterior, 1.0); }

    static EveStrategy intercept_resend(double attack_fraction = 1.0) {
        return EveStrategy(EveKind::InterceptResend, std::nullopt, ResendRule::MaxPosterior, attack_fraction);
    }

    static EveStrategy indirect_copy_oracle(ReferenceList list, double attack_fraction = 1.0) {
        return EveStrategy(EveKind::IndirectCopyOracle, std::move(list), ResendRule::MaxPosterior, attack_fraction);
    }

    static EveStrategy indirect_copy_physical(ReferenceList list, ResendRule rule = ResendRule::MaxPosterior,
                                              double attack_fraction = 1.0) {
        return EveStrategy(EveKind::IndirectCopyPhysical, std::move(list), rule, attack_fraction);
    }

    EveKind kind() const noexcept { return kind_; }
    ResendRule resend_rule() const noexcept { return rule_; }
    double attack_fraction() const noexcept { return attack_fraction_; }
    const std::optional<ReferenceList>& reference_list() const noexcept { return list_; }

    /// Reference-list index Eve guesses after ancilla outcome `outcome`
    /// (0 = |a>, 1 = |a_perp>): argmax of the likelihood m_k or 1 - m_k under
    /// a uniform prior, ties toward the lower index.
    std::size_t max_posterior_index(Bit outcome) const { return posterior_choice_.at(outcome); }

private:
    EveStrategy(EveKind kind, std::optional<ReferenceList> list, ResendRule rule, double attack_fraction)
        : kind_(kind), list_(std::move(list)), rule_(rule), attack_fraction_(attack_fraction) {
        if (!(attack_fraction_ >= 0.0 && attack_fraction_ <= 1.0))
            throw InvalidConfig("attack fraction must lie in [0, 1]");
        const bool needs_list = kind_ == EveKind::IndirectCopyOracle || kind_ == EveKind::IndirectCopyPhysical;
        if (needs_list && !list_) throw InvalidConfig("indirect-copy strategies need a reference list");
        if (list_) {
            const auto entries = list_->entries();
            for (Bit outcome : {Bit{0}, Bit{1}}) {
                std::size_t best = 0;
                double best_likelihood = -1.0;
                for (std::size_t k = 0; k < entries.size(); ++k) {
                    const double l = outcome == 0 ? entries[k].m : 1.0 - entries[k].m;
                    if (l > best_likelihood + 1e-12) {
                        best = k;
                        best_likelihood = l;
                    }
                }
                posterior_choice_[outcome] = best;
            }
        }
    }

    EveKind kind_;
    std::optional<ReferenceList> list_;
    ResendRule rule_;
    double attack_fraction_;
    std::array<std::size_t, 2> posterior_choice_{0, 0};
};

namespace detail {

inline Interception pass_through(const QuantumState& incoming) {
    EveRecord rec;
    rec.resent_state = incoming;
    return {incoming, rec};
}

inline Interception intercept_resend(const QuantumState& incoming, RandomSource& rng) {
    const Basis basis = rng.coin() ? Basis::Diagonal : Basis::Rectilinear;
    const Measurement m = measure(incoming, basis, rng);
    EveRecord rec;
    rec.intercepted = true;
    rec.guessed_bit = m.bit;
    rec.guessed_state = m.state;
    rec.resent_state = m.state;
    rec.measured_basis = basis;
    return {m.state, rec};
}

inline Interception indirect_copy_oracle(const ReferenceList& list, const QuantumState& incoming) {
    // Direct read of the state description; no single-copy measurement yields m.
    const double m = born_probability(incoming, list.ancilla().angle());
    const QuantumState copy = list.lookup(m);
    EveRecord rec;
    rec.intercepted = true;
    rec.exact = true;
    rec.guessed_state = copy;
    if (auto enc = decode(copy)) rec.guessed_bit = enc->bit;
    rec.resent_state = copy;
    return {copy, rec};
}

inline Interception indirect_copy_physical(const EveStrategy& strategy, const QuantumState& incoming,
                                           RandomSource& rng) {
    const ReferenceList& list = *strategy.reference_list();
    const Measurement m = measure(incoming, MeasurementBasis{list.ancilla().angle()}, rng);
    const QuantumState guess = list.entries()[strategy.max_posterior_index(m.bit)].state;
    EveRecord rec;
    rec.intercepted = true;
    rec.guessed_state = guess;
    if (auto enc = decode(guess)) rec.guessed_bit = enc->bit;
    rec.resent_state = strategy.resend_rule() == ResendRule::MaxPosterior ? guess : m.state;
    return {rec.resent_state, rec};
}

} // namespace detail

/// Eve's action on one pulse. Eve attacks with probability attack_fraction;
/// otherwise the pulse passes unchanged and the record carries no guess.
/// Throws NoMatch from the oracle kind when `incoming` is not a listed state.
inline Interception intercept(const EveStrategy& strategy, const QuantumState& incoming, RandomSource& rng) {
    if (strategy.kind() == EveKind::NoEve) return detail::pass_through(incoming);
    if (strategy.attack_fraction() < 1.0 && !rng.bernoulli(strategy.attack_fraction()))
        return detail::pass_through(incoming);

    switch (strategy.kind()) {
    case EveKind::InterceptResend: return detail::intercept_resend(incoming, rng);
    case EveKind::IndirectCopyOracle: return detail::indirect_copy_oracle(*strategy.reference_list(), incoming);
    case EveKind::IndirectCopyPhysical: return detail::indirect_copy_physical(strategy, incoming, rng);
    case EveKind::NoEve: break;
    }
    return detail::pass_through(incoming);
}

} // namespace bb84
