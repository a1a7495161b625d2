#include "ska/sim.hpp"

#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/core.h>

#include "ska/rng.hpp"

namespace ska {

namespace {

double parse_rate(const std::string& text, const std::string& whole) {
    std::size_t eq = text.find('=');
    if (eq == std::string::npos || text.substr(0, eq) != "q") {
        throw std::invalid_argument(fmt::format(
            "cannot parse adversary '{}', expected q=<probability>", whole));
    }
    std::size_t consumed = 0;
    double value = std::stod(text.substr(eq + 1), &consumed);
    if (consumed != text.size() - eq - 1) {
        throw std::invalid_argument(fmt::format(
            "cannot parse adversary '{}', trailing characters after the rate",
            whole));
    }
    return value;
}

} // namespace

AdversaryStrategy parse_adversary(const std::string& text) {
    if (text == "passive") return AdversaryStrategy::passive();
    std::size_t colon = text.find(':');
    std::string name = text.substr(0, colon);
    std::string args =
        colon == std::string::npos ? std::string{} : text.substr(colon + 1);
    if (name == "tamper") {
        double q = args.empty() ? 1.0 : parse_rate(args, text);
        return AdversaryStrategy::ook_tamper(std::make_shared<FlipEachZero>(q));
    }
    if (name == "jam") {
        if (args.empty()) {
            throw std::invalid_argument(
                "jam adversary needs a rate, e.g. jam:q=0.05");
        }
        return AdversaryStrategy::jammer(parse_rate(args, text));
    }
    throw std::invalid_argument(fmt::format(
        "unknown adversary '{}', expected passive, tamper:q=.. or jam:q=..",
        text));
}

ExperimentReport run_experiment(const ProtocolConfig& config,
                                const AdversaryStrategy& adversary) {
    config.validate();
    ExperimentReport report;
    report.config = config;
    report.rows.reserve(config.trials);

    Aggregates& agg = report.aggregates;
    double sum_eve = 0.0;
    for (std::size_t i = 0; i < config.trials; ++i) {
        ProtocolOutcome out =
            run_protocol(config, adversary, derive_seed(config.master_seed, i));
        TrialRow row;
        row.trial = i;
        row.verdict = out.verdict;
        row.key_match = out.key_match;
        row.detected = out.detected;
        row.bits_leaked = out.bits_leaked;
        row.eve_agreement = out.eve_agreement;
        row.p_ab_effective = out.p_ab_effective;
        row.n_k = out.n_k;
        report.rows.push_back(row);

        switch (out.verdict) {
        case Verdict::Success: agg.success_rate += 1.0; break;
        case Verdict::Abort: agg.abort_rate += 1.0; break;
        case Verdict::UndetectedMismatch: agg.undetected_rate += 1.0; break;
        }
        agg.mean_key_match += out.key_match ? 1.0 : 0.0;
        agg.mean_detected += out.detected ? 1.0 : 0.0;
        agg.mean_bits_leaked += static_cast<double>(out.bits_leaked);
        agg.mean_p_ab_effective += out.p_ab_effective;
        agg.mean_n_k += static_cast<double>(out.n_k);
        if (out.eve_agreement >= 0.0) {
            sum_eve += out.eve_agreement;
            ++agg.eve_samples;
        }
    }

    double n = static_cast<double>(config.trials);
    agg.success_rate /= n;
    agg.abort_rate /= n;
    agg.undetected_rate /= n;
    agg.mean_key_match /= n;
    agg.mean_detected /= n;
    agg.mean_bits_leaked /= n;
    agg.mean_p_ab_effective /= n;
    agg.mean_n_k /= n;
    agg.mean_eve_agreement =
        agg.eve_samples > 0 ? sum_eve / static_cast<double>(agg.eve_samples)
                            : -1.0;
    return report;
}

void emit_csv(const ExperimentReport& report, std::ostream& out) {
    out << "trial,outcome,key_match,detected,bits_leaked,eve_agreement,"
           "p_ab_effective,n_k\n";
    for (const TrialRow& row : report.rows) {
        out << fmt::format("{},{},{},{},{},{:.6f},{:.6f},{}\n", row.trial,
                           to_string(row.verdict), row.key_match ? 1 : 0,
                           row.detected ? 1 : 0, row.bits_leaked,
                           row.eve_agreement, row.p_ab_effective, row.n_k);
    }
    const Aggregates& agg = report.aggregates;
    out << fmt::format(
        "aggregate,success={:.6f}|abort={:.6f}|undetected={:.6f},"
        "{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n",
        agg.success_rate, agg.abort_rate, agg.undetected_rate,
        agg.mean_key_match, agg.mean_detected, agg.mean_bits_leaked,
        agg.mean_eve_agreement, agg.mean_p_ab_effective, agg.mean_n_k);
}

std::string csv_string(const ExperimentReport& report) {
    std::ostringstream out;
    emit_csv(report, out);
    return out.str();
}

void write_csv(const ExperimentReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
    }
    emit_csv(report, out);
}

} // namespace ska
