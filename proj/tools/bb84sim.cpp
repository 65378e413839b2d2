// bb84sim: run BB84 eavesdropping experiments and write JSON/CSV reports.
//
//   bb84sim run --eve intercept-resend --pulses 100000 --sessions 100
//   bb84sim detect-curve --force-difference --k-values 1,2,3,4 --sessions 10000
//
// Exit codes: 0 success, 2 invalid configuration, 3 runtime error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bb84/bb84.hpp"

namespace {

constexpr int kExitInvalidConfig = 2;
constexpr int kExitRuntime = 3;

struct Options {
    bb84::ExperimentConfig config;
    std::string eve = "none";
    std::string resend_rule = "max-posterior";
    std::string format = "json";
    std::optional<std::size_t> pa_t;
    std::optional<std::size_t> pa_s;
    std::string out;
    std::vector<std::size_t> k_values{1, 2, 3, 4, 5, 6, 7, 8};
};

void add_common(CLI::App& cmd, Options& o) {
    auto& c = o.config;
    cmd.add_option("--pulses", c.n_pulses, "Pulses per session")->check(CLI::PositiveNumber);
    cmd.add_option("--sessions", c.n_sessions, "Independent sessions")->check(CLI::PositiveNumber);
    cmd.add_option("--efficiency", c.efficiency, "Detection efficiency in (0, 1]");
    cmd.add_option("--parity-rounds", c.parity_rounds, "Parity verification rounds k");
    cmd.add_option("--eve", o.eve, "Eavesdropper")
        ->check(CLI::IsMember({"none", "intercept-resend", "indirect-oracle", "indirect-physical"}));
    cmd.add_option("--ancilla-angle", c.strategy.ancilla_angle, "Ancilla Hilbert angle in radians (default pi/6)");
    cmd.add_option("--resend-rule", o.resend_rule, "Physical indirect-copy resend rule")
        ->check(CLI::IsMember({"max-posterior", "resend-ancilla"}));
    cmd.add_option("--attack-fraction", c.strategy.attack_fraction, "Fraction of pulses Eve attacks");
    cmd.add_option("--pa-t", o.pa_t, "Privacy amplification: assumed Eve information t (bits)");
    cmd.add_option("--pa-s", o.pa_s, "Privacy amplification: security margin s (bits)");
    cmd.add_option("--seed", c.master_seed, "Master seed (u64)");
    cmd.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    cmd.add_option("--out", o.out, "Output path (default stdout)");
}

void finalize(Options& o) {
    auto& c = o.config;
    c.strategy.kind = *bb84::parse_eve_kind(o.eve);
    c.strategy.resend_rule = *bb84::parse_resend_rule(o.resend_rule);
    c.format = o.format == "csv" ? bb84::OutputFormat::Csv : bb84::OutputFormat::Json;
    if (o.pa_t.has_value() != o.pa_s.has_value())
        throw bb84::InvalidConfig("--pa-t and --pa-s must be given together");
    if (o.pa_t) c.privacy = bb84::PrivacySpec{*o.pa_t, *o.pa_s};
}

int emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open " << o.out << " for writing\n";
        return kExitRuntime;
    }
    f << text;
    return f ? 0 : kExitRuntime;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"BB84 key distribution simulator with pluggable eavesdroppers"};
    app.require_subcommand(1);

    Options run_opts;
    auto* run = app.add_subcommand("run", "Run sessions and report per-session rows and aggregates");
    add_common(*run, run_opts);

    Options curve_opts;
    curve_opts.config.n_pulses = 256;
    curve_opts.config.n_sessions = 1000;
    auto* curve = app.add_subcommand("detect-curve", "Detection rate as a function of parity rounds k");
    add_common(*curve, curve_opts);
    curve->add_option("--k-values", curve_opts.k_values, "Parity round counts")->delimiter(',');
    curve->add_flag("--force-difference", curve_opts.config.force_difference,
                    "Flip one random sifted bit of Bob's key before verification");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalidConfig;
    }

    Options& o = run->parsed() ? run_opts : curve_opts;
    try {
        finalize(o);
        o.config.validate();
        if (run->parsed()) return emit(o, bb84::dump(bb84::run_experiment(o.config)));
        return emit(o, bb84::dump_curve(o.config, bb84::detection_rate_curve(o.config, o.k_values)));
    } catch (const bb84::SessionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.invalid_config() ? kExitInvalidConfig : kExitRuntime;
    } catch (const bb84::InvalidConfig& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitInvalidConfig;
    } catch (const bb84::DegenerateAncilla& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitInvalidConfig;
    } catch (const bb84::InvalidParams& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
