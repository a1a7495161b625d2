#include <cstdint>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "ska/sim.hpp"

namespace {

struct Options {
    ska::ProtocolConfig config;
    std::string adversary = "passive";
    std::string out;
};

void add_common_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--n0", opt.config.n0, "raw bits exchanged up front")
        ->capture_default_str();
    cmd->add_option("--p-ae", opt.config.p_ae,
                    "eavesdropper tap error rate")
        ->capture_default_str();
    cmd->add_option("--rounds", opt.config.distill_rounds,
                    "distillation rounds")
        ->capture_default_str();
    cmd->add_option("--passes", opt.config.cascade_passes,
                    "reconciliation passes")
        ->capture_default_str();
    cmd->add_option("--k1", opt.config.initial_block_size,
                    "first-pass block size, 0 picks it from the error rate")
        ->capture_default_str();
    cmd->add_option("--t1", opt.config.hash_bits, "hash output length in bits")
        ->capture_default_str();
    cmd->add_option("--key-len", opt.config.key_length,
                    "final key length in bits")
        ->capture_default_str();
    cmd->add_option("--code", opt.config.code_name,
                    "integrity code, manchester or berger")
        ->capture_default_str();
    cmd->add_option("--adversary", opt.adversary,
                    "passive, tamper:q=<prob> or jam:q=<prob>")
        ->capture_default_str();
    cmd->add_option("--trials", opt.config.trials, "independent runs")
        ->capture_default_str();
    cmd->add_option("--seed", opt.config.master_seed, "master seed")
        ->envname("SHIELDED_KA_SEED")
        ->capture_default_str();
    cmd->add_option("--out", opt.out, "write per-trial CSV here");
}

void print_summary(const ska::ExperimentReport& report) {
    const ska::Aggregates& agg = report.aggregates;
    fmt::print("trials:            {}\n", report.rows.size());
    fmt::print("success rate:      {:.4f}\n", agg.success_rate);
    fmt::print("abort rate:        {:.4f}\n", agg.abort_rate);
    fmt::print("undetected rate:   {:.6f}\n", agg.undetected_rate);
    fmt::print("mean p_ab in use:  {:.4f}\n", agg.mean_p_ab_effective);
    fmt::print("mean kept bits:    {:.1f}\n", agg.mean_n_k);
    fmt::print("mean bits leaked:  {:.1f}\n", agg.mean_bits_leaked);
    if (agg.eve_samples > 0) {
        fmt::print("eve agreement:     {:.4f} over {} completed runs\n",
                   agg.mean_eve_agreement, agg.eve_samples);
    } else {
        fmt::print("eve agreement:     n/a (no completed runs)\n");
    }
    std::size_t sizing = ska::recommended_key_length(
        static_cast<std::size_t>(agg.mean_n_k),
        static_cast<std::size_t>(agg.mean_bits_leaked),
        report.config.hash_bits);
    fmt::print("leakage-safe key:  {} bits\n", sizing);
}

int run_single(Options& opt) {
    ska::AdversaryStrategy adversary = ska::parse_adversary(opt.adversary);
    ska::ExperimentReport report = ska::run_experiment(opt.config, adversary);
    if (opt.config.trials == 1) {
        const ska::TrialRow& row = report.rows.front();
        fmt::print("outcome:           {}\n", ska::to_string(row.verdict));
        fmt::print("keys match:        {}\n", row.key_match ? "yes" : "no");
        fmt::print("tamper detected:   {}\n", row.detected ? "yes" : "no");
    }
    print_summary(report);
    if (!opt.out.empty()) {
        ska::write_csv(report, opt.out);
        fmt::print("wrote {}\n", opt.out);
    }
    return 0;
}

std::string sweep_path(const std::string& base, double p_ab) {
    std::string stem = base;
    std::string ext;
    std::size_t dot = base.rfind('.');
    if (dot != std::string::npos && dot > 0) {
        stem = base.substr(0, dot);
        ext = base.substr(dot);
    }
    return fmt::format("{}_pab{:g}{}", stem, p_ab, ext);
}

int run_sweep(Options& opt, const std::vector<double>& p_values) {
    ska::AdversaryStrategy adversary = ska::parse_adversary(opt.adversary);
    fmt::print("{:>8} {:>8} {:>8} {:>11} {:>9} {:>11}\n", "p_ab", "success",
               "abort", "undetected", "kept", "leaked");
    for (double p : p_values) {
        ska::ProtocolConfig config = opt.config;
        config.p_ab = p;
        ska::ExperimentReport report = ska::run_experiment(config, adversary);
        const ska::Aggregates& agg = report.aggregates;
        fmt::print("{:>8.3f} {:>8.4f} {:>8.4f} {:>11.6f} {:>9.1f} {:>11.1f}\n",
                   p, agg.success_rate, agg.abort_rate, agg.undetected_rate,
                   agg.mean_n_k, agg.mean_bits_leaked);
        if (!opt.out.empty()) {
            ska::write_csv(report, sweep_path(opt.out, p));
        }
    }
    if (!opt.out.empty()) {
        fmt::print("wrote one CSV per p_ab next to {}\n", opt.out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"key agreement over a noisy channel with tamper-evident "
                 "public discussion"};
    app.require_subcommand(1);

    Options opt;
    std::vector<double> sweep_p{0.05, 0.1, 0.15};

    CLI::App* run = app.add_subcommand("run", "run one experiment");
    add_common_flags(run, opt);
    run->add_option("--p-ab", opt.config.p_ab, "main channel error rate")
        ->capture_default_str();

    CLI::App* sweep =
        app.add_subcommand("sweep", "run one experiment per channel error rate");
    add_common_flags(sweep, opt);
    sweep
        ->add_option("--p-ab", sweep_p,
                     "comma separated main channel error rates")
        ->delimiter(',')
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_single(opt);
        return run_sweep(opt, sweep_p);
    } catch (const std::exception& err) {
        fmt::print(stderr, "error: {}\n", err.what());
        return 1;
    }
}
