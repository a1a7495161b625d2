// Acceptance checks for the key agreement library. Each criterion prints
// one PASS/FAIL line; the process exits nonzero if any of them fail.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "ska/adversary.hpp"
#include "ska/amplify.hpp"
#include "ska/bitstring.hpp"
#include "ska/cascade.hpp"
#include "ska/channel.hpp"
#include "ska/codes.hpp"
#include "ska/distill.hpp"
#include "ska/integrity.hpp"
#include "ska/protocol.hpp"
#include "ska/rng.hpp"
#include "ska/sim.hpp"

using namespace ska;

namespace {

constexpr std::uint64_t kMaster = 0x5ca1ab1e;

int g_failures = 0;

void report(int index, bool pass, const std::string& detail) {
    fmt::print("{} criterion {:2}: {}\n", pass ? "PASS" : "FAIL", index,
               detail);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
}

// 1. Non-inclusive support oracle over both code families.
void criterion_support_oracle() {
    auto start = std::chrono::steady_clock::now();
    bool all = true;
    for (std::size_t l = 1; l <= 10; ++l) {
        all = all && check_non_inclusive_supports(ManchesterCode(l));
    }
    for (std::size_t l = 1; l <= 12; ++l) {
        all = all && check_non_inclusive_supports(BergerCode(l));
    }
    double elapsed = seconds_since(start);
    report(1, all && elapsed < 60.0,
           fmt::format("support oracle holds for manchester l<=10 and berger "
                       "l<=12 in {:.2f}s",
                       elapsed));
}

// 2. Exhaustive 0->1 tampering against Manchester codewords.
void criterion_manchester_detection() {
    std::uint64_t altered = 0;
    std::uint64_t undetected = 0;
    for (std::size_t l = 1; l <= 6; ++l) {
        ManchesterCode code(l);
        const std::size_t cl = code.codeword_length();
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << l); ++v) {
            BitString word = code.encode(BitString::from_u64(v, l));
            std::vector<std::size_t> zeros;
            for (std::size_t i = 0; i < cl; ++i) {
                if (!word[i]) zeros.push_back(i);
            }
            for (std::uint64_t m = 1; m < (std::uint64_t{1} << zeros.size());
                 ++m) {
                BitString tampered = word;
                for (std::size_t z = 0; z < zeros.size(); ++z) {
                    if ((m >> z) & 1u) tampered.set(zeros[z], 1);
                }
                ++altered;
                if (code.verify(tampered).has_value()) ++undetected;
            }
        }
    }
    report(2, altered > 0 && undetected == 0,
           fmt::format("{} support-changing masks on manchester l<=6, {} "
                       "undetected",
                       altered, undetected));
}

// 3. Shielded transmission under randomized tampering at t1 = 16.
void criterion_shielded_bound() {
    auto start = std::chrono::steady_clock::now();
    const std::size_t payload_length = 64;
    const std::size_t t1 = 16;
    HashFamily family(payload_length, t1);
    auto code = std::make_shared<BergerCode>(t1);
    const std::size_t frame_length =
        payload_length + code->codeword_length();

    const TargetedRegion payload_only(0, payload_length, 0.5);
    const TargetedRegion tag_only(payload_length, frame_length, 0.5);
    const FlipEachZero sprinkle(0.1);
    const FlipKRandomZeros three(3);
    const TamperPolicy* policies[] = {&payload_only, &tag_only, &sprinkle,
                                      &three};

    const std::size_t trials = 150000;
    std::uint64_t altered = 0;
    std::uint64_t undetected = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        Prng rng(derive_seed(kMaster + 3, t));
        HashId id = select_hash(family, rng);
        ShieldedChannelParams params(payload_length, family, id, code);
        BitString payload = BitString::random(payload_length, rng);
        OokFrame frame = shielded_send(payload, params);
        const TamperPolicy* policy = policies[rng.below(4)];
        BitString received =
            transmit_ook(frame, policy->mask_for(frame.payload, rng));
        if (received.prefix(payload_length) != payload) {
            ++altered;
            if (shielded_receive(received, params).accepted) ++undetected;
        }
    }
    double rate = static_cast<double>(undetected) /
                  static_cast<double>(altered);
    double p0 = std::pow(2.0, -16.0);
    double bound =
        p0 + 5.0 * std::sqrt(p0 * (1 - p0) / static_cast<double>(altered));
    double elapsed = seconds_since(start);
    report(3,
           altered >= 100000 && rate <= bound && elapsed < 300.0,
           fmt::format("undetected altered payload rate {:.3e} <= {:.3e} "
                       "({} of {} altered frames) in {:.2f}s",
                       rate, bound, undetected, altered, elapsed));
}

// 4. Post-round disagreement against the closed form.
void criterion_distill_rate() {
    const std::size_t n = 100000;
    bool all = true;
    std::string detail;
    int index = 0;
    for (double p : {0.05, 0.1, 0.2}) {
        Prng rng(derive_seed(kMaster + 4, static_cast<std::uint64_t>(index)));
        BitString a = BitString::random(n, rng);
        BitString b =
            transmit_bsc(a, BscParams(p, derive_seed(kMaster + 5,
                                                     static_cast<std::uint64_t>(
                                                         index))));
        DistillRoundResult round = distill_round(a, b);
        double rate =
            static_cast<double>(round.a_kept.hamming_distance(round.b_kept)) /
            static_cast<double>(round.a_kept.size());
        double expected = post_round_error_rate(p);
        double sigma = std::sqrt(expected * (1 - expected) /
                                 static_cast<double>(round.a_kept.size()));
        bool ok = std::abs(rate - expected) < 5 * sigma;
        all = all && ok;
        detail += fmt::format("p={} |{:.2e}-{:.2e}|<5s={:.2e} ", p,
                              rate, expected, 5 * sigma);
        ++index;
    }
    report(4, all, detail);
}

// 5. Distillation widens the gap between partner and eavesdropper.
void criterion_advantage() {
    const std::size_t n = 100000;
    const double p = 0.15;
    int wins = 0;
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        Prng rng(derive_seed(kMaster + 6, trial));
        BitString source = BitString::random(n, rng);
        BitString a =
            transmit_bsc(source, BscParams(p, derive_seed(kMaster + 7, trial)));
        BitString e =
            transmit_bsc(source, BscParams(p, derive_seed(kMaster + 8, trial)));
        BitString b = source;
        for (int round = 0; round < 2; ++round) {
            auto kept = kept_pair_indices(pair_parities(a), pair_parities(b));
            a = keep_first_bits(a, kept);
            b = keep_first_bits(b, kept);
            e = keep_first_bits(e, kept);
        }
        double ab = static_cast<double>(a.hamming_distance(b)) /
                    static_cast<double>(a.size());
        double ae = static_cast<double>(a.hamming_distance(e)) /
                    static_cast<double>(a.size());
        if (ab < ae) ++wins;
    }
    report(5, wins >= 19,
           fmt::format("partner beats eavesdropper after 2 rounds in {}/20 "
                       "trials",
                       wins));
}

// 6. Cascade convergence at the textbook operating point.
void criterion_cascade_convergence() {
    const std::size_t n = 1024;
    const double p = 0.03;
    const std::size_t k1 = 25;
    std::uint64_t wrong = 0;
    std::uint64_t total = 0;
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
        Prng rng(derive_seed(kMaster + 9, trial));
        BitString a = BitString::random(n, rng);
        BitString b =
            transmit_bsc(a, BscParams(p, derive_seed(kMaster + 10, trial)));
        CascadeConfig config(4, k1,
                             {derive_seed(kMaster + 11, trial),
                              derive_seed(kMaster + 12, trial),
                              derive_seed(kMaster + 13, trial)});
        ReconciliationResult result = run_cascade(a, b, config);
        wrong += result.corrected_b.hamming_distance(a);
        total += n;
    }
    double residual = static_cast<double>(wrong) / static_cast<double>(total);
    report(6, residual < 1e-3,
           fmt::format("residual mismatch rate {:.2e} < 1e-3 over 1000 runs "
                       "(k1={})",
                       residual, k1));
}

// 7. Toeplitz collision rate at the hash guarantee.
void criterion_universality() {
    const std::size_t input_length = 64;
    const std::size_t t1 = 16;
    HashFamily family(input_length, t1);
    const std::size_t pairs = 1000000;
    std::uint64_t collisions = 0;
    for (std::size_t i = 0; i < pairs; ++i) {
        Prng rng(derive_seed(kMaster + 14, i));
        HashId id = select_hash(family, rng);
        BitString x = BitString::random(input_length, rng);
        BitString y = BitString::random(input_length, rng);
        if (x == y) {
            y.flip(static_cast<std::size_t>(rng.below(input_length)));
        }
        ToeplitzHash h(family, id);
        if (h(x) == h(y)) ++collisions;
    }
    double rate = static_cast<double>(collisions) / static_cast<double>(pairs);
    double p0 = std::pow(2.0, -16.0);
    double sigma = std::sqrt(p0 * (1 - p0) / static_cast<double>(pairs));
    report(7, std::abs(rate - p0) < 5 * sigma,
           fmt::format("collision rate {:.3e} within 5 sigma of 2^-16 "
                       "({} collisions over 10^6 pairs)",
                       rate, collisions));
}

// 8. Eve's per-bit agreement with the final key under defaults.
void criterion_eve_ignorance() {
    ProtocolConfig config;
    config.trials = 512;
    config.master_seed = kMaster + 15;
    ExperimentReport report_data =
        run_experiment(config, AdversaryStrategy::passive());
    double agree_bits = 0.0;
    std::size_t samples = 0;
    for (const TrialRow& row : report_data.rows) {
        if (row.eve_agreement < 0.0) continue;
        agree_bits += row.eve_agreement * static_cast<double>(config.key_length);
        ++samples;
    }
    double total_bits =
        static_cast<double>(samples) * static_cast<double>(config.key_length);
    double rate = agree_bits / total_bits;
    double sigma = std::sqrt(0.25 / total_bits);
    report(8, samples >= 500 && std::abs(rate - 0.5) < 5 * sigma,
           fmt::format("per-bit key agreement {:.4f} within 5 sigma of 0.5 "
                       "over {} completed runs",
                       rate, samples));
}

// 9. Outcome trichotomy and the undetected-mismatch ceiling.
void criterion_trichotomy() {
    ProtocolConfig config;
    config.n0 = 512;
    config.p_ab = 0.08;
    const std::size_t trials = 150;
    struct Named {
        const char* name;
        AdversaryStrategy strategy;
    };
    std::vector<Named> adversaries;
    adversaries.push_back({"passive", AdversaryStrategy::passive()});
    adversaries.push_back({"jam", AdversaryStrategy::jammer(0.05)});
    adversaries.push_back(
        {"flip-each", AdversaryStrategy::ook_tamper(
                          std::make_shared<FlipEachZero>(0.02))});
    adversaries.push_back(
        {"flip-k", AdversaryStrategy::ook_tamper(
                       std::make_shared<FlipKRandomZeros>(2))});
    adversaries.push_back(
        {"flip-all", AdversaryStrategy::ook_tamper(
                         std::make_shared<FlipAllZeros>())});
    adversaries.push_back(
        {"targeted", AdversaryStrategy::ook_tamper(
                         std::make_shared<TargetedRegion>(0, 64, 0.2))});

    bool consistent = true;
    std::uint64_t worst_um = 0;
    double p0 = std::pow(2.0, -static_cast<double>(config.hash_bits));
    double bound =
        p0 + 5.0 * std::sqrt(p0 * (1 - p0) / static_cast<double>(trials));
    bool within_bound = true;
    std::string summary;
    for (const Named& entry : adversaries) {
        std::uint64_t um = 0;
        std::uint64_t success = 0;
        std::uint64_t abort = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            ProtocolOutcome outcome = run_protocol(
                config, entry.strategy, derive_seed(kMaster + 16, t));
            switch (outcome.verdict) {
            case Verdict::Success:
                ++success;
                consistent = consistent && outcome.key_match &&
                             !outcome.detected &&
                             outcome.key_a == outcome.key_b;
                break;
            case Verdict::Abort:
                ++abort;
                consistent = consistent && outcome.detected;
                break;
            case Verdict::UndetectedMismatch:
                ++um;
                consistent = consistent && !outcome.key_match &&
                             !outcome.detected &&
                             !(outcome.key_a == outcome.key_b);
                break;
            }
        }
        worst_um = std::max(worst_um, um);
        double um_rate = static_cast<double>(um) / trials;
        within_bound = within_bound && um_rate <= bound;
        summary += fmt::format("{}:{}/{}/{} ", entry.name, success, abort, um);
    }
    report(9, consistent && within_bound,
           fmt::format("success/abort/undetected per adversary {}(bound "
                       "{:.1e}, worst undetected count {})",
                       summary, bound, worst_um));
}

// 10. Byte-identical CSV under a fixed configuration and seed.
void criterion_determinism() {
    ProtocolConfig config;
    config.n0 = 1024;
    config.trials = 40;
    config.master_seed = 2024;
    bool all = true;
    for (const char* name : {"passive", "tamper:q=0.1", "jam:q=0.05"}) {
        AdversaryStrategy adversary = parse_adversary(name);
        std::string once = csv_string(run_experiment(config, adversary));
        std::string twice = csv_string(run_experiment(config, adversary));
        all = all && once == twice && !once.empty();
    }
    report(10, all,
           "repeated experiments emit byte-identical CSV for each adversary");
}

} // namespace

int main() {
    auto start = std::chrono::steady_clock::now();
    criterion_support_oracle();
    criterion_manchester_detection();
    criterion_shielded_bound();
    criterion_distill_rate();
    criterion_advantage();
    criterion_cascade_convergence();
    criterion_universality();
    criterion_eve_ignorance();
    criterion_trichotomy();
    criterion_determinism();
    fmt::print("{} of 10 criteria passed in {:.1f}s\n", 10 - g_failures,
               seconds_since(start));
    return g_failures == 0 ? 0 : 1;
}
