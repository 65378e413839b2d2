#pragma once

// Real pure polarization states and projective measurement.
//
// A state is the ray cos(theta)|0> + sin(theta)|pi/2>, identified by its
// Hilbert angle theta reduced to [0, pi). Overlaps, Born probabilities and
// the ancilla reference list used by the indirect-copy attack all reduce to
// trigonometry on angle differences.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "bb84/errors.hpp"
#include "bb84/random.hpp"

namespace bb84 {

using Bit = std::uint8_t;
using Bits = std::vector<Bit>;

/// Reference-list matching and degeneracy tolerance.
inline constexpr double kMatchTolerance = 1e-9;

/// Ancilla angle pi/6, giving m = {3/4, 1/4, (sqrt3+1)^2/8, (sqrt3-1)^2/8}.
inline constexpr double kDefaultAncillaAngle = std::numbers::pi / 6.0;

class HilbertAngle {
public:
    constexpr HilbertAngle() = default;
    explicit HilbertAngle(double radians) : theta_(reduce(radians)) {}

    double radians() const noexcept { return theta_; }

    /// Rotated by pi/2: the orthogonal ray.
    HilbertAngle orthogonal() const { return HilbertAngle(theta_ + std::numbers::pi / 2.0); }

    friend bool operator==(const HilbertAngle&, const HilbertAngle&) = default;

    /// Distance between rays, accounting for the wrap at pi.
    static double distance(HilbertAngle a, HilbertAngle b) noexcept {
        const double d = std::fabs(a.theta_ - b.theta_);
        return std::fmin(d, std::numbers::pi - d);
    }

private:
    static double reduce(double radians) {
        double r = std::fmod(radians, std::numbers::pi);
        if (r < 0.0) r += std::numbers::pi;
        if (r >= std::numbers::pi) r = 0.0;
        return r;
    }

    double theta_ = 0.0;
};

class QuantumState {
public:
    constexpr QuantumState() = default;
    explicit QuantumState(HilbertAngle angle) : angle_(angle) {}

    static QuantumState from_radians(double radians) { return QuantumState(HilbertAngle(radians)); }

    HilbertAngle angle() const noexcept { return angle_; }
    double radians() const noexcept { return angle_.radians(); }

    /// Amplitudes on |0> and |pi/2>.
    double c0() const { return std::cos(angle_.radians()); }
    double c1() const { return std::sin(angle_.radians()); }

    QuantumState orthogonal() const { return QuantumState(angle_.orthogonal()); }

    bool same_ray(const QuantumState& other, double tol = kMatchTolerance) const noexcept {
        return HilbertAngle::distance(angle_, other.angle_) <= tol;
    }

    friend bool operator==(const QuantumState&, const QuantumState&) = default;

private:
    HilbertAngle angle_;
};

inline std::ostream& operator<<(std::ostream& os, const QuantumState& s) {
    return os << "|" << s.radians() << ">";
}

enum class Basis : std::uint8_t { Rectilinear, Diagonal };

inline const char* to_string(Basis b) noexcept {
    return b == Basis::Rectilinear ? "rectilinear" : "diagonal";
}

/// An orthonormal measurement basis {first, first + pi/2}; outcome bit 0
/// projects onto `first`.
struct MeasurementBasis {
    HilbertAngle first;

    HilbertAngle outcome(Bit bit) const { return bit == 0 ? first : first.orthogonal(); }
};

inline MeasurementBasis measurement_basis(Basis b) {
    return MeasurementBasis{HilbertAngle(b == Basis::Rectilinear ? 0.0 : std::numbers::pi / 4.0)};
}

/// Coding scheme: rectilinear 0 -> |0>, 1 -> |pi/2>; diagonal 0 -> |pi/4>, 1 -> |3pi/4>.
inline QuantumState encode(Bit bit, Basis basis) {
    return QuantumState(measurement_basis(basis).outcome(bit));
}

struct Encoding {
    Basis basis;
    Bit bit;
    friend bool operator==(const Encoding&, const Encoding&) = default;
};

/// Inverse of encode; empty when the state is not one of the four signal states.
inline std::optional<Encoding> decode(const QuantumState& state, double tol = kMatchTolerance) {
    for (Basis b : {Basis::Rectilinear, Basis::Diagonal}) {
        for (Bit bit : {Bit{0}, Bit{1}}) {
            if (state.same_ray(encode(bit, b), tol)) return Encoding{b, bit};
        }
    }
    return std::nullopt;
}

/// The four signal states in reference-list order: |0>, |pi/2>, |pi/4>, |3pi/4>.
inline std::array<QuantumState, 4> standard_bqs() {
    return {encode(0, Basis::Rectilinear), encode(1, Basis::Rectilinear),
            encode(0, Basis::Diagonal), encode(1, Basis::Diagonal)};
}

inline double overlap(const QuantumState& a, const QuantumState& b) {
    return std::cos(a.radians() - b.radians());
}

inline double born_probability(const QuantumState& state, HilbertAngle outcome) {
    const double c = std::cos(state.radians() - outcome.radians());
    return c * c;
}

struct Measurement {
    Bit bit;
    QuantumState state; // post-measurement eigenstate
};

/// Projective measurement. Probabilities within 1e-12 of 0 or 1 are snapped
/// so eigenstates measure deterministically.
inline Measurement measure(const QuantumState& state, const MeasurementBasis& basis, RandomSource& rng) {
    double p0 = born_probability(state, basis.first);
    if (p0 < 1e-12) p0 = 0.0;
    if (p0 > 1.0 - 1e-12) p0 = 1.0;
    const Bit bit = rng.bernoulli(p0) ? 0 : 1;
    return {bit, QuantumState(basis.outcome(bit))};
}

inline Measurement measure(const QuantumState& state, Basis basis, RandomSource& rng) {
    return measure(state, measurement_basis(basis), rng);
}

/// Table from squared ancilla overlap m to signal state.
class ReferenceList {
public:
    struct Entry {
        QuantumState state;
        double m;
    };

    /// Computes m_k = cos^2(theta_k - theta_ancilla) for every state.
    /// Throws DegenerateAncilla when two values coincide within kMatchTolerance.
    static ReferenceList build(const QuantumState& ancilla, std::span<const QuantumState> bqs) {
        if (bqs.empty()) throw InvalidParams("reference list needs at least one state");
        ReferenceList list;
        list.ancilla_ = ancilla;
        list.entries_.reserve(bqs.size());
        for (const auto& s : bqs) {
            const double m = born_probability(s, ancilla.angle());
            for (std::size_t j = 0; j < list.entries_.size(); ++j) {
                if (std::fabs(list.entries_[j].m - m) <= kMatchTolerance) {
                    std::ostringstream msg;
                    msg << "ancilla " << ancilla << " gives m=" << m << " for both " << list.entries_[j].state
                        << " and " << s;
                    throw DegenerateAncilla(msg.str());
                }
            }
            list.entries_.push_back({s, m});
        }
        return list;
    }

    const QuantumState& ancilla() const noexcept { return ancilla_; }
    std::span<const Entry> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

    /// Index of the entry whose m matches within kMatchTolerance.
    std::size_t index_of(double m) const {
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (std::fabs(entries_[i].m - m) <= kMatchTolerance) return i;
        }
        std::ostringstream msg;
        msg << "no reference entry for m=" << m;
        throw NoMatch(msg.str());
    }

    const QuantumState& lookup(double m) const { return entries_[index_of(m)].state; }

private:
    ReferenceList() = default;

    QuantumState ancilla_;
    std::vector<Entry> entries_;
};

inline ReferenceList build_reference_list(const QuantumState& ancilla, std::span<const QuantumState> bqs) {
    return ReferenceList::build(ancilla, bqs);
}

/// Reference list over the four standard signal states.
inline ReferenceList build_reference_list(double ancilla_radians = kDefaultAncillaAngle) {
    const auto bqs = standard_bqs();
    return ReferenceList::build(QuantumState::from_radians(ancilla_radians), bqs);
}

inline const QuantumState& lookup(const ReferenceList& list, double m) { return list.lookup(m); }

} // namespace bb84
