#pragma once

// Experiment runner: many independent sessions under one configuration,
// per-session rows and aggregate statistics.
//
// Session i draws from RandomSource(derive_seed(master_seed, i)); rows are
// produced in index order, so a report is a pure function of its config.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bb84/adversary.hpp"
#include "bb84/amplification.hpp"
#include "bb84/errors.hpp"
#include "bb84/protocol.hpp"
#include "bb84/quantum.hpp"
#include "bb84/random.hpp"

namespace bb84 {

struct StrategySpec {
    EveKind kind = EveKind::NoEve;
    double ancilla_angle = kDefaultAncillaAngle;
    ResendRule resend_rule = ResendRule::MaxPosterior;
    double attack_fraction = 1.0;

    EveStrategy build() const {
        switch (kind) {
        case EveKind::NoEve: return EveStrategy::none();
        case EveKind::InterceptResend: return EveStrategy::intercept_resend(attack_fraction);
        case EveKind::IndirectCopyOracle:
            return EveStrategy::indirect_copy_oracle(build_reference_list(ancilla_angle), attack_fraction);
        case EveKind::IndirectCopyPhysical:
            return EveStrategy::indirect_copy_physical(build_reference_list(ancilla_angle), resend_rule,
                                                       attack_fraction);
        }
        throw InvalidConfig("unknown eavesdropper kind");
    }

    friend bool operator==(const StrategySpec&, const StrategySpec&) = default;
};

struct PrivacySpec {
    std::size_t t = 0;
    std::size_t s = 1;
    friend bool operator==(const PrivacySpec&, const PrivacySpec&) = default;
};

enum class OutputFormat : std::uint8_t { Json, Csv };

struct ExperimentConfig {
    std::size_t n_pulses = 1000;
    std::size_t n_sessions = 1;
    double efficiency = 1.0;
    std::size_t parity_rounds = 0;
    StrategySpec strategy;
    std::optional<PrivacySpec> privacy; // empty: skip privacy amplification
    std::uint64_t master_seed = 0;
    OutputFormat format = OutputFormat::Json;
    bool force_difference = false;

    SessionConfig session() const { return {n_pulses, efficiency, parity_rounds, force_difference}; }

    /// Throws InvalidConfig (or DegenerateAncilla for a bad ancilla angle).
    void validate() const {
        if (n_sessions == 0) throw InvalidConfig("need at least one session");
        session().validate();
        if (!std::isfinite(strategy.ancilla_angle)) throw InvalidConfig("ancilla angle must be finite");
        if (privacy && privacy->s == 0) throw InvalidConfig("privacy margin s must be positive");
        (void)strategy.build();
    }

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct SessionRow {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    double qber = 0.0;
    std::size_t sifted_length = 0;
    std::size_t sifted_errors = 0;
    bool detected = false;
    std::size_t final_key_length = 0;
    std::optional<double> eve_accuracy;
    std::optional<double> eve_advantage;

    friend bool operator==(const SessionRow&, const SessionRow&) = default;
};

struct Aggregates {
    double mean_qber = 0.0;
    double qber_ci_low = 0.0;
    double qber_ci_high = 0.0;
    double detection_rate = 0.0;
    double mean_sifted_fraction = 0.0;
    std::optional<double> mean_eve_accuracy;
    std::optional<double> mean_eve_advantage;

    friend bool operator==(const Aggregates&, const Aggregates&) = default;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<SessionRow> sessions;
    Aggregates aggregates;
};

namespace detail {

inline std::optional<double> mean_of_present(const std::vector<SessionRow>& rows,
                                             std::optional<double> SessionRow::*field) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : rows) {
        if (r.*field) {
            sum += *(r.*field);
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

} // namespace detail

/// Aggregates as a function of rows only. The QBER interval is the normal
/// approximation over all pooled sifted bits, clamped to [0, 1].
inline Aggregates compute_aggregates(const std::vector<SessionRow>& rows, std::size_t n_pulses) {
    Aggregates a;
    if (rows.empty()) return a;
    const double count = static_cast<double>(rows.size());
    double qber_sum = 0.0;
    double sifted_fraction_sum = 0.0;
    double detected = 0.0;
    double pooled = 0.0;
    for (const auto& r : rows) {
        qber_sum += r.qber;
        sifted_fraction_sum += static_cast<double>(r.sifted_length) / static_cast<double>(n_pulses);
        detected += r.detected ? 1.0 : 0.0;
        pooled += static_cast<double>(r.sifted_length);
    }
    a.mean_qber = qber_sum / count;
    a.detection_rate = detected / count;
    a.mean_sifted_fraction = sifted_fraction_sum / count;
    const double half = pooled > 0.0 ? 1.96 * std::sqrt(a.mean_qber * (1.0 - a.mean_qber) / pooled) : 0.0;
    a.qber_ci_low = std::fmax(0.0, a.mean_qber - half);
    a.qber_ci_high = std::fmin(1.0, a.mean_qber + half);
    a.mean_eve_accuracy = detail::mean_of_present(rows, &SessionRow::eve_accuracy);
    a.mean_eve_advantage = detail::mean_of_present(rows, &SessionRow::eve_advantage);
    return a;
}

namespace detail {

inline bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

inline bool close(const std::optional<double>& a, const std::optional<double>& b, double tol) {
    if (a.has_value() != b.has_value()) return false;
    return !a || close(*a, *b, tol);
}

} // namespace detail

/// True when the stored aggregates match a recomputation from the rows.
inline bool aggregates_consistent(const ExperimentReport& report, double tol = 1e-12) {
    const Aggregates a = compute_aggregates(report.sessions, report.config.n_pulses);
    const Aggregates& b = report.aggregates;
    return detail::close(a.mean_qber, b.mean_qber, tol) && detail::close(a.qber_ci_low, b.qber_ci_low, tol) &&
           detail::close(a.qber_ci_high, b.qber_ci_high, tol) &&
           detail::close(a.detection_rate, b.detection_rate, tol) &&
           detail::close(a.mean_sifted_fraction, b.mean_sifted_fraction, tol) &&
           detail::close(a.mean_eve_accuracy, b.mean_eve_accuracy, tol) &&
           detail::close(a.mean_eve_advantage, b.mean_eve_advantage, tol);
}

/// One session of an experiment, seeded from (master_seed, index).
inline SessionRow run_session_row(const ExperimentConfig& config, const EveStrategy& strategy, std::size_t index) {
    SessionRow row;
    row.index = index;
    row.seed = derive_seed(config.master_seed, index);
    RandomSource rng(row.seed);

    const SessionTranscript t = run_session(config.session(), strategy, rng);
    row.qber = t.qber();
    row.sifted_length = t.sifted_length();
    row.sifted_errors = t.sifted_errors();
    row.detected = t.detected;
    row.eve_accuracy = t.eve_accuracy();

    if (t.reconciled_key) {
        if (config.privacy) {
            const PrivacyParams params{t.reconciled_key->size(), config.privacy->t, config.privacy->s};
            const HashDescriptor hash = sample_hash(params, rng);
            row.final_key_length = hash.r;
            row.eve_advantage = eve_advantage(t, hash);
        } else {
            row.final_key_length = t.reconciled_key->size();
        }
    }
    return row;
}

inline ExperimentReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    const EveStrategy strategy = config.strategy.build();
    ExperimentReport report;
    report.config = config;
    report.sessions.reserve(config.n_sessions);
    for (std::size_t i = 0; i < config.n_sessions; ++i) {
        try {
            report.sessions.push_back(run_session_row(config, strategy, i));
        } catch (const InvalidParams& e) {
            throw SessionError(i, e.what(), true);
        } catch (const Error& e) {
            throw SessionError(i, e.what(), false);
        }
    }
    report.aggregates = compute_aggregates(report.sessions, config.n_pulses);
    return report;
}

struct CurvePoint {
    std::size_t k = 0;
    double detection_rate = 0.0;
    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// Detection rate per parity-round count, each over config.n_sessions
/// sessions with the config's master seed. Privacy amplification is skipped.
inline std::vector<CurvePoint> detection_rate_curve(const ExperimentConfig& config,
                                                    const std::vector<std::size_t>& k_values) {
    std::vector<CurvePoint> curve;
    curve.reserve(k_values.size());
    for (std::size_t k : k_values) {
        ExperimentConfig c = config;
        c.parity_rounds = k;
        c.privacy.reset();
        curve.push_back({k, run_experiment(c).aggregates.detection_rate});
    }
    return curve;
}

} // namespace bb84
