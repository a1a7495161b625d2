#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ska/adversary.hpp"
#include "ska/protocol.hpp"

namespace ska {

// One CSV row worth of per-trial results.
struct TrialRow {
    std::size_t trial = 0;
    Verdict verdict = Verdict::Abort;
    bool key_match = false;
    bool detected = false;
    std::size_t bits_leaked = 0;
    double eve_agreement = -1.0;
    double p_ab_effective = 0.0;
    std::size_t n_k = 0;
};

// Means over an experiment. eve_agreement averages only the trials where
// a guess could be reconstructed; -1 when there were none.
struct Aggregates {
    double success_rate = 0.0;
    double abort_rate = 0.0;
    double undetected_rate = 0.0;
    double mean_key_match = 0.0;
    double mean_detected = 0.0;
    double mean_bits_leaked = 0.0;
    double mean_eve_agreement = -1.0;
    double mean_p_ab_effective = 0.0;
    double mean_n_k = 0.0;
    std::size_t eve_samples = 0;
};

struct ExperimentReport {
    ProtocolConfig config;
    std::vector<TrialRow> rows;
    Aggregates aggregates;
};

// Accepts "passive", "tamper:q=<prob>" (each zero flipped independently),
// or "jam:q=<prob>" (extra noise on the phase 1 channel).
AdversaryStrategy parse_adversary(const std::string& text);

// Runs config.trials independent protocol runs, trial i seeded from
// (master_seed, i). Single-threaded and fully deterministic.
ExperimentReport run_experiment(const ProtocolConfig& config,
                                const AdversaryStrategy& adversary);

void emit_csv(const ExperimentReport& report, std::ostream& out);
std::string csv_string(const ExperimentReport& report);
void write_csv(const ExperimentReport& report, const std::string& path);

} // namespace ska
