#pragma once

// JSON and CSV serialization of experiment reports and detection curves.
//
// Reals are written in shortest round-trip form, so both formats carry the
// exact double values.

#include <charconv>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "bb84/errors.hpp"
#include "bb84/harness.hpp"

namespace bb84 {

using json = nlohmann::json;

inline const char* to_string(OutputFormat f) noexcept { return f == OutputFormat::Json ? "json" : "csv"; }

inline std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline json optional_real(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline std::optional<double> read_optional_real(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
}

template <typename Enum, typename Parse>
Enum read_enum(const json& j, const char* key, Parse parse) {
    const auto s = j.at(key).get<std::string>();
    auto v = parse(s);
    if (!v) throw InvalidConfig(std::string("unknown ") + key + " '" + s + "'");
    return *v;
}

} // namespace detail

inline json to_json(const ExperimentConfig& c) {
    json j;
    j["pulses"] = c.n_pulses;
    j["sessions"] = c.n_sessions;
    j["efficiency"] = c.efficiency;
    j["parity_rounds"] = c.parity_rounds;
    j["eve"] = to_string(c.strategy.kind);
    j["ancilla_angle"] = c.strategy.ancilla_angle;
    j["resend_rule"] = to_string(c.strategy.resend_rule);
    j["attack_fraction"] = c.strategy.attack_fraction;
    j["pa_t"] = c.privacy ? json(c.privacy->t) : json(nullptr);
    j["pa_s"] = c.privacy ? json(c.privacy->s) : json(nullptr);
    j["seed"] = c.master_seed;
    j["format"] = to_string(c.format);
    j["force_difference"] = c.force_difference;
    return j;
}

inline ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    c.n_pulses = j.at("pulses").get<std::size_t>();
    c.n_sessions = j.at("sessions").get<std::size_t>();
    c.efficiency = j.at("efficiency").get<double>();
    c.parity_rounds = j.at("parity_rounds").get<std::size_t>();
    c.strategy.kind = detail::read_enum<EveKind>(j, "eve", parse_eve_kind);
    c.strategy.ancilla_angle = j.at("ancilla_angle").get<double>();
    c.strategy.resend_rule = detail::read_enum<ResendRule>(j, "resend_rule", parse_resend_rule);
    c.strategy.attack_fraction = j.at("attack_fraction").get<double>();
    if (!j.at("pa_t").is_null()) c.privacy = PrivacySpec{j.at("pa_t").get<std::size_t>(), j.at("pa_s").get<std::size_t>()};
    c.master_seed = j.at("seed").get<std::uint64_t>();
    c.format = j.at("format").get<std::string>() == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    c.force_difference = j.value("force_difference", false);
    return c;
}

inline json to_json(const SessionRow& r) {
    return json{{"index", r.index},
                {"seed", r.seed},
                {"qber", r.qber},
                {"sifted_length", r.sifted_length},
                {"sifted_errors", r.sifted_errors},
                {"detected", r.detected},
                {"final_key_length", r.final_key_length},
                {"eve_accuracy", detail::optional_real(r.eve_accuracy)},
                {"eve_advantage", detail::optional_real(r.eve_advantage)}};
}

inline json to_json(const Aggregates& a) {
    return json{{"mean_qber", a.mean_qber},
                {"qber_ci_low", a.qber_ci_low},
                {"qber_ci_high", a.qber_ci_high},
                {"detection_rate", a.detection_rate},
                {"mean_sifted_fraction", a.mean_sifted_fraction},
                {"mean_eve_accuracy", detail::optional_real(a.mean_eve_accuracy)},
                {"mean_eve_advantage", detail::optional_real(a.mean_eve_advantage)}};
}

inline json to_json(const ExperimentReport& report) {
    json rows = json::array();
    for (const auto& r : report.sessions) rows.push_back(to_json(r));
    return json{{"config", to_json(report.config)}, {"sessions", rows}, {"aggregates", to_json(report.aggregates)}};
}

/// Parses a JSON report and checks its aggregates against its rows.
inline ExperimentReport report_from_json(const json& j) {
    ExperimentReport report;
    report.config = config_from_json(j.at("config"));
    for (const auto& r : j.at("sessions")) {
        SessionRow row;
        row.index = r.at("index").get<std::size_t>();
        row.seed = r.at("seed").get<std::uint64_t>();
        row.qber = r.at("qber").get<double>();
        row.sifted_length = r.at("sifted_length").get<std::size_t>();
        row.sifted_errors = r.at("sifted_errors").get<std::size_t>();
        row.detected = r.at("detected").get<bool>();
        row.final_key_length = r.at("final_key_length").get<std::size_t>();
        row.eve_accuracy = detail::read_optional_real(r, "eve_accuracy");
        row.eve_advantage = detail::read_optional_real(r, "eve_advantage");
        report.sessions.push_back(row);
    }
    const auto& a = j.at("aggregates");
    report.aggregates.mean_qber = a.at("mean_qber").get<double>();
    report.aggregates.qber_ci_low = a.at("qber_ci_low").get<double>();
    report.aggregates.qber_ci_high = a.at("qber_ci_high").get<double>();
    report.aggregates.detection_rate = a.at("detection_rate").get<double>();
    report.aggregates.mean_sifted_fraction = a.at("mean_sifted_fraction").get<double>();
    report.aggregates.mean_eve_accuracy = detail::read_optional_real(a, "mean_eve_accuracy");
    report.aggregates.mean_eve_advantage = detail::read_optional_real(a, "mean_eve_advantage");
    if (!aggregates_consistent(report)) throw Error("report aggregates do not match its session rows");
    return report;
}

inline std::string dump_json(const ExperimentReport& report) { return to_json(report).dump(2) + "\n"; }

inline std::string dump_csv(const ExperimentReport& report) {
    const auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
    std::ostringstream os;
    os << "index,seed,qber,sifted_length,sifted_errors,detected,final_key_length,eve_accuracy,eve_advantage\n";
    for (const auto& r : report.sessions) {
        os << r.index << ',' << r.seed << ',' << format_real(r.qber) << ',' << r.sifted_length << ','
           << r.sifted_errors << ',' << (r.detected ? 1 : 0) << ',' << r.final_key_length << ','
           << opt(r.eve_accuracy) << ',' << opt(r.eve_advantage) << '\n';
    }
    const Aggregates& a = report.aggregates;
    os << "# mean_qber=" << format_real(a.mean_qber) << '\n'
       << "# qber_ci_low=" << format_real(a.qber_ci_low) << '\n'
       << "# qber_ci_high=" << format_real(a.qber_ci_high) << '\n'
       << "# detection_rate=" << format_real(a.detection_rate) << '\n'
       << "# mean_sifted_fraction=" << format_real(a.mean_sifted_fraction) << '\n'
       << "# mean_eve_accuracy=" << opt(a.mean_eve_accuracy) << '\n'
       << "# mean_eve_advantage=" << opt(a.mean_eve_advantage) << '\n';
    return os.str();
}

inline std::string dump(const ExperimentReport& report) {
    return report.config.format == OutputFormat::Json ? dump_json(report) : dump_csv(report);
}

inline std::string dump_curve(const ExperimentConfig& config, const std::vector<CurvePoint>& curve) {
    if (config.format == OutputFormat::Csv) {
        std::ostringstream os;
        os << "k,detection_rate\n";
        for (const auto& p : curve) os << p.k << ',' << format_real(p.detection_rate) << '\n';
        return os.str();
    }
    json points = json::array();
    for (const auto& p : curve) points.push_back(json{{"k", p.k}, {"detection_rate", p.detection_rate}});
    return json{{"config", to_json(config)}, {"curve", points}}.dump(2) + "\n";
}

} // namespace bb84
