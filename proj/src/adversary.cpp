#include "ska/adversary.hpp"

#include <numeric>
#include <stdexcept>

#include <fmt/core.h>

#include "ska/amplify.hpp"
#include "ska/cascade.hpp"
#include "ska/distill.hpp"
#include "ska/protocol.hpp"

namespace ska {

FlipEachZero::FlipEachZero(double q) : q_(q) {
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument(
            fmt::format("flip probability must lie in [0, 1], got {}", q));
    }
}

BitString FlipEachZero::mask_for(const BitString& frame, Prng& rng) const {
    BitString mask(frame.size());
    for (std::size_t i = 0; i < frame.size(); ++i) {
        if (!frame[i] && rng.bernoulli(q_)) mask.set(i, 1);
    }
    return mask;
}

BitString FlipKRandomZeros::mask_for(const BitString& frame, Prng& rng) const {
    std::vector<std::size_t> zeros;
    for (std::size_t i = 0; i < frame.size(); ++i) {
        if (!frame[i]) zeros.push_back(i);
    }
    BitString mask(frame.size());
    if (zeros.size() <= k_) {
        for (std::size_t i : zeros) mask.set(i, 1);
        return mask;
    }
    // Partial Fisher-Yates: the first k entries become the sample.
    for (std::size_t i = 0; i < k_; ++i) {
        std::size_t j = i + rng.below(zeros.size() - i);
        std::swap(zeros[i], zeros[j]);
        mask.set(zeros[i], 1);
    }
    return mask;
}

BitString FlipKRandomZeros::streaming_mask_for(const BitString&, Prng&) const {
    throw std::invalid_argument(
        "flip-k-random-zeros needs the whole frame before choosing a mask");
}

BitString FlipAllZeros::mask_for(const BitString& frame, Prng&) const {
    BitString mask(frame.size());
    for (std::size_t i = 0; i < frame.size(); ++i) {
        if (!frame[i]) mask.set(i, 1);
    }
    return mask;
}

TargetedRegion::TargetedRegion(std::size_t lo, std::size_t hi, double q)
    : lo_(lo), hi_(hi), q_(q) {
    if (lo > hi) {
        throw std::invalid_argument(
            fmt::format("targeted region [{}, {}) is inverted", lo, hi));
    }
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument(
            fmt::format("flip probability must lie in [0, 1], got {}", q));
    }
}

BitString TargetedRegion::mask_for(const BitString& frame, Prng& rng) const {
    BitString mask(frame.size());
    std::size_t hi = std::min(hi_, frame.size());
    for (std::size_t i = std::min(lo_, hi); i < hi; ++i) {
        if (!frame[i] && rng.bernoulli(q_)) mask.set(i, 1);
    }
    return mask;
}

AdversaryStrategy AdversaryStrategy::passive() {
    return AdversaryStrategy{AdversaryKind::Passive, nullptr, 0.0};
}

AdversaryStrategy AdversaryStrategy::ook_tamper(
    std::shared_ptr<const TamperPolicy> policy) {
    if (!policy) {
        throw std::invalid_argument("tampering strategy needs a policy");
    }
    return AdversaryStrategy{AdversaryKind::OokTamper, std::move(policy), 0.0};
}

AdversaryStrategy AdversaryStrategy::jammer(double extra_noise) {
    if (!(extra_noise >= 0.0 && extra_noise < 0.5)) {
        throw std::invalid_argument(fmt::format(
            "jamming noise must lie in [0, 0.5), got {}", extra_noise));
    }
    return AdversaryStrategy{AdversaryKind::Jammer, nullptr, extra_noise};
}

BitString eavesdrop(const BitString& msg, double p_ae, Prng& rng) {
    if (!(p_ae >= 0.0 && p_ae < 0.5)) {
        throw std::invalid_argument(fmt::format(
            "eavesdrop error rate must lie in [0, 0.5), got {}", p_ae));
    }
    BitString out = msg;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (rng.bernoulli(p_ae)) out.flip(i);
    }
    return out;
}

BitString tamper(const AdversaryStrategy& strategy, const BitString& frame,
                 Prng& rng) {
    if (strategy.kind != AdversaryKind::OokTamper) {
        throw std::invalid_argument(
            "only a tampering strategy can alter OOK frames");
    }
    return frame | strategy.policy->mask_for(frame, rng);
}

BitString tamper_streaming(const AdversaryStrategy& strategy,
                           const BitString& frame, Prng& rng) {
    if (strategy.kind != AdversaryKind::OokTamper) {
        throw std::invalid_argument(
            "only a tampering strategy can alter OOK frames");
    }
    return frame | strategy.policy->streaming_mask_for(frame, rng);
}

BitString eve_key_guess(EveView& view, const ProtocolConfig& config) {
    const std::vector<BitString>& msgs = view.observed_c0;
    std::size_t idx = 0;
    auto take = [&](const char* what) -> const BitString& {
        if (idx >= msgs.size()) {
            throw std::invalid_argument(fmt::format(
                "observed transcript ended early, expected {}", what));
        }
        return msgs[idx++];
    };

    BitString mine = view.observed_cp;
    std::vector<std::size_t> positions(mine.size());
    std::iota(positions.begin(), positions.end(), std::size_t{0});

    for (std::size_t round = 0; round < config.distill_rounds; ++round) {
        const BitString& tag_parities = take("tag parities");
        const BitString& sensor_parities = take("sensor parities");
        if (tag_parities.size() != mine.size() / 2 ||
            sensor_parities.size() != tag_parities.size()) {
            throw std::invalid_argument("distillation parities do not parse");
        }
        std::vector<std::size_t> pairs =
            kept_pair_indices(tag_parities, sensor_parities);
        mine = keep_first_bits(mine, pairs);
        std::vector<std::size_t> surviving;
        surviving.reserve(pairs.size());
        for (std::size_t j : pairs) surviving.push_back(positions[2 * j]);
        positions = std::move(surviving);
    }
    view.kept_positions = positions;

    const BitString& seed_msg = take("shuffle seeds");
    if (seed_msg.size() != (config.cascade_passes - 1) * 64) {
        throw std::invalid_argument("shuffle seed message does not parse");
    }
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < config.cascade_passes - 1; ++i) {
        seeds.push_back(seed_msg.slice(i * 64, 64).to_u64());
    }
    CascadeConfig cascade_config(config.cascade_passes,
                                 config.block_size_for(mine.size()),
                                 std::move(seeds));
    CascadeReplay replay =
        replay_cascade_messages(mine.size(), cascade_config, msgs, idx);
    idx += replay.messages_consumed;
    for (std::size_t pos : replay.flips) mine.flip(pos);

    const BitString& id_msg = take("hash id");
    HashFamily family(config.hash_input_length(), config.hash_bits);
    if (id_msg.size() != family.seed_length()) {
        throw std::invalid_argument("hash id message does not parse");
    }
    return amplify(mine, family, HashId{id_msg}, config.key_length);
}

} // namespace ska
