#include "ska/protocol.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <utility>

#include <fmt/core.h>

#include "ska/adversary.hpp"
#include "ska/channel.hpp"
#include "ska/distill.hpp"
#include "ska/integrity.hpp"

namespace ska {

namespace {

// Per-trial seed streams, split from the trial seed.
constexpr std::uint64_t kRawStreamSeed = 0;
constexpr std::uint64_t kChannelAbSeed = 1;
constexpr std::uint64_t kChannelAeSeed = 2;
constexpr std::uint64_t kHashChoiceSeed = 3;
constexpr std::uint64_t kAdversarySeed = 4;
constexpr std::uint64_t kShuffleSeed = 5;

double mismatch_rate(const BitString& x, const BitString& y) {
    if (x.size() != y.size() || x.empty()) return -1.0;
    return static_cast<double>(x.hamming_distance(y)) /
           static_cast<double>(x.size());
}

} // namespace

void ProtocolConfig::validate() const {
    if (!(p_ab >= 0.0 && p_ab < 0.5)) {
        throw std::invalid_argument(fmt::format(
            "channel error rate must lie in [0, 0.5), got {}", p_ab));
    }
    if (!(p_ae >= 0.0 && p_ae < 0.5)) {
        throw std::invalid_argument(fmt::format(
            "eavesdropper error rate must lie in [0, 0.5), got {}", p_ae));
    }
    if (hash_bits == 0 || hash_bits > 64) {
        throw std::invalid_argument(fmt::format(
            "hash length must lie in 1..64, got {}", hash_bits));
    }
    if (key_length == 0 || key_length > hash_bits) {
        throw std::invalid_argument(fmt::format(
            "key length must lie in 1..{} (the hash length), got {}",
            hash_bits, key_length));
    }
    if (distill_rounds == 0) {
        throw std::invalid_argument("distillation needs at least one round");
    }
    if (cascade_passes == 0) {
        throw std::invalid_argument("cascade needs at least one pass");
    }
    if (trials == 0) {
        throw std::invalid_argument("experiments need at least one trial");
    }
    if (code_name != "manchester" && code_name != "berger") {
        throw std::invalid_argument(fmt::format(
            "unknown code '{}', expected manchester or berger", code_name));
    }
}

std::size_t ProtocolConfig::hash_input_length() const {
    return std::max(n0, hash_bits + 64);
}

std::size_t ProtocolConfig::block_size_for(std::size_t n_k) const {
    if (initial_block_size > 0) return initial_block_size;
    double p_est = iterated_error_rate(p_ab, distill_rounds);
    std::size_t cap = std::max<std::size_t>(1, n_k / 4);
    return std::min(initial_block_size_for(p_est), cap);
}

std::shared_ptr<const UnidirectionalCode> ProtocolConfig::make_code() const {
    if (code_name == "manchester") {
        return std::make_shared<ManchesterCode>(hash_bits);
    }
    if (code_name == "berger") {
        return std::make_shared<BergerCode>(hash_bits);
    }
    throw std::invalid_argument(fmt::format(
        "unknown code '{}', expected manchester or berger", code_name));
}

bool on_public_channel(MessageType type) {
    return type != MessageType::RawStream && type != MessageType::Failure;
}

const char* to_string(Phase phase) {
    switch (phase) {
    case Phase::ChooseHash: return "choose-hash";
    case Phase::RawExchange: return "raw-exchange";
    case Phase::Distill: return "distill";
    case Phase::Reconcile: return "reconcile";
    case Phase::Amplify: return "amplify";
    case Phase::AnnounceHash: return "announce-hash";
    case Phase::IntegrityVerify: return "integrity-verify";
    case Phase::Done: return "done";
    case Phase::Abort: return "abort";
    }
    return "unknown";
}

const char* to_string(MessageType type) {
    switch (type) {
    case MessageType::RawStream: return "raw-stream";
    case MessageType::DistillParity: return "distill-parity";
    case MessageType::CascadeSeeds: return "cascade-seeds";
    case MessageType::CascadeTraffic: return "cascade-traffic";
    case MessageType::HashAnnounce: return "hash-announce";
    case MessageType::TranscriptCheck: return "transcript-check";
    case MessageType::KeyConfirmTag: return "key-confirm-tag";
    case MessageType::KeyConfirmSensor: return "key-confirm-sensor";
    case MessageType::Failure: return "failure";
    }
    return "unknown";
}

const char* to_string(Verdict verdict) {
    switch (verdict) {
    case Verdict::Success: return "success";
    case Verdict::Abort: return "abort";
    case Verdict::UndetectedMismatch: return "undetected_mismatch";
    }
    return "unknown";
}

TagDevice::TagDevice(const ProtocolConfig& config,
                     std::uint64_t hash_stream_seed,
                     std::uint64_t shuffle_stream_seed)
    : config_(config),
      code_(config.make_code()),
      family_(config.hash_input_length(), config.hash_bits),
      confirm_family_(config.key_length + 8, config.hash_bits),
      id_([&] {
          Prng rng(hash_stream_seed);
          return select_hash(family_, rng);
      }()),
      digest_(family_, id_),
      shuffle_stream_(shuffle_stream_seed) {
    config_.validate();
    phase_ = Phase::RawExchange;
}

std::vector<Message> TagDevice::fail(std::string reason) {
    phase_ = Phase::Abort;
    abort_reason_ = std::move(reason);
    return {Message{MessageType::Failure, BitString{}}};
}

std::vector<Message> TagDevice::finish_distill() {
    if (bits_.size() < config_.hash_bits) {
        return fail("too few distilled bits for the hash length");
    }
    std::vector<std::uint64_t> seeds;
    BitString seed_msg;
    for (std::size_t i = 0; i + 1 < config_.cascade_passes; ++i) {
        std::uint64_t seed = shuffle_stream_.next_u64();
        seeds.push_back(seed);
        seed_msg.append(BitString::from_u64(seed, 64));
    }
    CascadeConfig cascade_config(config_.cascade_passes,
                                 config_.block_size_for(bits_.size()),
                                 std::move(seeds));
    responder_.emplace(bits_, cascade_config);
    BitString first = responder_->initial_message();
    digest_.absorb(seed_msg);
    digest_.absorb(first);
    parity_bits_ += first.size();
    phase_ = Phase::Reconcile;
    return {Message{MessageType::CascadeSeeds, std::move(seed_msg)},
            Message{MessageType::CascadeTraffic, std::move(first)}};
}

std::vector<Message> TagDevice::announce() {
    phase_ = Phase::Amplify;
    key_ = amplify(bits_, family_, id_, config_.key_length);
    phase_ = Phase::AnnounceHash;
    digest_.absorb(id_.seed);
    phase_ = Phase::IntegrityVerify;
    awaiting_confirm_ = false;
    return {Message{MessageType::HashAnnounce, id_.seed}};
}

std::vector<Message> TagDevice::step(const Message& incoming) {
    if (phase_ == Phase::Abort) return {};
    if (incoming.type == MessageType::Failure) {
        phase_ = Phase::Abort;
        if (abort_reason_.empty()) abort_reason_ = "peer signaled failure";
        return {};
    }
    switch (phase_) {
    case Phase::RawExchange: {
        if (incoming.type != MessageType::RawStream) {
            return fail("unexpected message while awaiting the raw stream");
        }
        if (incoming.payload.size() != config_.n0) {
            return fail("raw stream length mismatch");
        }
        raw_bits_ = incoming.payload;
        bits_ = incoming.payload;
        phase_ = Phase::Distill;
        round_ = 0;
        BitString parities = pair_parities(bits_);
        digest_.absorb(parities);
        parity_bits_ += parities.size();
        return {Message{MessageType::DistillParity, std::move(parities)}};
    }
    case Phase::Distill: {
        if (incoming.type != MessageType::DistillParity) {
            return fail("unexpected message during distillation");
        }
        BitString mine = pair_parities(bits_);
        if (incoming.payload.size() != mine.size()) {
            return fail("distillation parity length mismatch");
        }
        digest_.absorb(incoming.payload);
        parity_bits_ += incoming.payload.size();
        bits_ = keep_first_bits(bits_, kept_pair_indices(mine, incoming.payload));
        ++round_;
        if (round_ < config_.distill_rounds) {
            BitString next = pair_parities(bits_);
            digest_.absorb(next);
            parity_bits_ += next.size();
            return {Message{MessageType::DistillParity, std::move(next)}};
        }
        return finish_distill();
    }
    case Phase::Reconcile: {
        if (incoming.type != MessageType::CascadeTraffic) {
            return fail("unexpected message during reconciliation");
        }
        digest_.absorb(incoming.payload);
        parity_bits_ += incoming.payload.size();
        CascadeStep step = responder_->on_message(incoming.payload);
        if (step.kind == CascadeStep::Kind::Fail) {
            return fail("reconciliation exchange broke down");
        }
        if (step.kind == CascadeStep::Kind::Reply) {
            digest_.absorb(step.message);
            parity_bits_ += step.message.size();
            return {Message{MessageType::CascadeTraffic, std::move(step.message)}};
        }
        return announce();
    }
    case Phase::IntegrityVerify: {
        if (!awaiting_confirm_) {
            if (incoming.type != MessageType::TranscriptCheck) {
                return fail("unexpected message while awaiting the transcript check");
            }
            if (!verify_transcript(digest_, incoming.payload, *code_).accepted) {
                return fail("transcript verification failed");
            }
            confirm_id_ = derive_confirmation_id(confirm_family_, digest_.state());
            awaiting_confirm_ = true;
            return {Message{MessageType::KeyConfirmTag,
                            key_confirm_frame(key_, true, confirm_family_,
                                              confirm_id_, *code_)}};
        }
        if (incoming.type != MessageType::KeyConfirmSensor) {
            return fail("unexpected message while awaiting key confirmation");
        }
        if (incoming.payload !=
            key_confirm_frame(key_, false, confirm_family_, confirm_id_, *code_)) {
            return fail("key confirmation failed");
        }
        phase_ = Phase::Done;
        return {};
    }
    default:
        return fail(fmt::format("unexpected {} message in phase {}",
                                to_string(incoming.type), to_string(phase_)));
    }
}

SensorDevice::SensorDevice(const ProtocolConfig& config,
                           std::uint64_t raw_stream_seed)
    : config_(config),
      code_(config.make_code()),
      family_(config.hash_input_length(), config.hash_bits),
      confirm_family_(config.key_length + 8, config.hash_bits) {
    config_.validate();
    Prng rng(raw_stream_seed);
    raw_bits_ = BitString::random(config_.n0, rng);
    bits_ = raw_bits_;
}

std::vector<Message> SensorDevice::fail(std::string reason) {
    phase_ = Phase::Abort;
    abort_reason_ = std::move(reason);
    return {Message{MessageType::Failure, BitString{}}};
}

std::vector<Message> SensorDevice::start() {
    if (phase_ != Phase::RawExchange) {
        throw std::logic_error("sensor already started");
    }
    phase_ = Phase::Distill;
    round_ = 0;
    return {Message{MessageType::RawStream, raw_bits_}};
}

std::vector<Message> SensorDevice::step(const Message& incoming) {
    if (phase_ == Phase::Abort) return {};
    if (incoming.type == MessageType::Failure) {
        phase_ = Phase::Abort;
        if (abort_reason_.empty()) abort_reason_ = "peer signaled failure";
        return {};
    }
    switch (phase_) {
    case Phase::Distill: {
        if (incoming.type != MessageType::DistillParity) {
            return fail("unexpected message during distillation");
        }
        BitString mine = pair_parities(bits_);
        if (incoming.payload.size() != mine.size()) {
            return fail("distillation parity length mismatch");
        }
        transcript_.push_back(incoming.payload);
        transcript_.push_back(mine);
        bits_ = keep_first_bits(bits_, kept_pair_indices(incoming.payload, mine));
        ++round_;
        if (round_ == config_.distill_rounds) phase_ = Phase::Reconcile;
        return {Message{MessageType::DistillParity, std::move(mine)}};
    }
    case Phase::Reconcile: {
        if (!corrector_) {
            if (incoming.type != MessageType::CascadeSeeds) {
                return fail("unexpected message while awaiting shuffle seeds");
            }
            if (incoming.payload.size() != (config_.cascade_passes - 1) * 64) {
                return fail("shuffle seed message length mismatch");
            }
            transcript_.push_back(incoming.payload);
            std::vector<std::uint64_t> seeds;
            for (std::size_t i = 0; i + 1 < config_.cascade_passes; ++i) {
                seeds.push_back(incoming.payload.slice(i * 64, 64).to_u64());
            }
            CascadeConfig cascade_config(config_.cascade_passes,
                                         config_.block_size_for(bits_.size()),
                                         std::move(seeds));
            pre_cascade_bits_ = bits_;
            corrector_.emplace(bits_, cascade_config);
            return {};
        }
        if (incoming.type != MessageType::CascadeTraffic) {
            return fail("unexpected message during reconciliation");
        }
        transcript_.push_back(incoming.payload);
        CascadeStep step = corrector_->on_message(incoming.payload);
        if (step.kind != CascadeStep::Kind::Reply) {
            return fail("reconciliation exchange broke down");
        }
        transcript_.push_back(step.message);
        if (corrector_->done()) {
            bits_ = corrector_->bits();
            phase_ = Phase::AnnounceHash;
        }
        return {Message{MessageType::CascadeTraffic, std::move(step.message)}};
    }
    case Phase::AnnounceHash: {
        if (incoming.type != MessageType::HashAnnounce) {
            return fail("unexpected message while awaiting the hash id");
        }
        if (incoming.payload.size() != family_.seed_length()) {
            return fail("hash id length mismatch");
        }
        transcript_.push_back(incoming.payload);
        id_ = HashId{incoming.payload};
        if (bits_.size() < config_.hash_bits) {
            return fail("too few reconciled bits for the hash length");
        }
        TranscriptDigest digest(family_, id_);
        for (const BitString& m : transcript_) digest.absorb(m);
        key_ = amplify(bits_, family_, id_, config_.key_length);
        confirm_id_ = derive_confirmation_id(confirm_family_, digest.state());
        phase_ = Phase::IntegrityVerify;
        return {Message{MessageType::TranscriptCheck,
                        transcript_check_frame(digest, *code_)}};
    }
    case Phase::IntegrityVerify: {
        if (incoming.type != MessageType::KeyConfirmTag) {
            return fail("unexpected message while awaiting key confirmation");
        }
        if (incoming.payload !=
            key_confirm_frame(key_, true, confirm_family_, confirm_id_, *code_)) {
            return fail("key confirmation failed");
        }
        phase_ = Phase::Done;
        return {Message{MessageType::KeyConfirmSensor,
                        key_confirm_frame(key_, false, confirm_family_,
                                          confirm_id_, *code_)}};
    }
    default:
        return fail(fmt::format("unexpected {} message in phase {}",
                                to_string(incoming.type), to_string(phase_)));
    }
}

ProtocolOutcome run_protocol(const ProtocolConfig& config,
                             const AdversaryStrategy& adversary,
                             std::uint64_t trial_seed) {
    config.validate();
    double p_effective = config.p_ab;
    if (adversary.kind == AdversaryKind::Jammer) {
        p_effective = compose_error_rates(config.p_ab, adversary.extra_noise);
    }
    ProtocolOutcome outcome;
    outcome.p_ab_effective = p_effective;
    if (config.n0 == 0) {
        outcome.detected = true;
        outcome.abort_reason = "no raw bits to exchange";
        return outcome;
    }

    TagDevice tag(config, derive_seed(trial_seed, kHashChoiceSeed),
                  derive_seed(trial_seed, kShuffleSeed));
    SensorDevice sensor(config, derive_seed(trial_seed, kRawStreamSeed));
    BscChannel noisy_channel(
        BscParams(p_effective, derive_seed(trial_seed, kChannelAbSeed)));
    Prng eve_channel(derive_seed(trial_seed, kChannelAeSeed));
    Prng adversary_rng(derive_seed(trial_seed, kAdversarySeed));
    EveView eve;

    struct InFlight {
        bool to_tag;
        Message msg;
    };
    std::deque<InFlight> wire;
    for (Message& m : sensor.start()) wire.push_back({true, std::move(m)});

    while (!wire.empty()) {
        InFlight item = std::move(wire.front());
        wire.pop_front();
        Message delivered = std::move(item.msg);
        if (delivered.type == MessageType::RawStream) {
            eve.observed_cp = eavesdrop(delivered.payload, config.p_ae, eve_channel);
            delivered.payload = noisy_channel.transmit(delivered.payload);
        } else if (on_public_channel(delivered.type)) {
            if (adversary.kind == AdversaryKind::OokTamper) {
                delivered.payload = tamper(adversary, delivered.payload, adversary_rng);
            }
            eve.observed_c0.push_back(delivered.payload);
        }
        std::vector<Message> replies =
            item.to_tag ? tag.step(delivered) : sensor.step(delivered);
        for (Message& r : replies) wire.push_back({!item.to_tag, std::move(r)});
    }

    outcome.n_k = tag.distilled_bits().size();
    outcome.bits_leaked = tag.parity_bits_seen();
    outcome.raw_error_rate = mismatch_rate(tag.raw_bits(), sensor.raw_bits());
    outcome.distilled_error_rate =
        mismatch_rate(tag.distilled_bits(), sensor.pre_cascade_bits());
    bool sensor_corrected = sensor.phase() == Phase::AnnounceHash ||
                            sensor.phase() == Phase::IntegrityVerify ||
                            sensor.phase() == Phase::Done;
    if (sensor_corrected) {
        outcome.residual_error_rate =
            mismatch_rate(tag.distilled_bits(), sensor.bits());
    }

    if (tag.phase() == Phase::Done && sensor.phase() == Phase::Done) {
        outcome.key_a = tag.key();
        outcome.key_b = sensor.key();
        outcome.key_match = outcome.key_a == outcome.key_b;
        outcome.verdict =
            outcome.key_match ? Verdict::Success : Verdict::UndetectedMismatch;
        outcome.detected = false;
        try {
            BitString guess = eve_key_guess(eve, config);
            std::size_t agree =
                guess.size() - guess.hamming_distance(outcome.key_a);
            outcome.eve_agreement =
                static_cast<double>(agree) / static_cast<double>(guess.size());
        } catch (const std::invalid_argument&) {
            outcome.eve_agreement = -1.0;
        }
    } else {
        outcome.verdict = Verdict::Abort;
        outcome.detected = true;
        outcome.abort_reason = !tag.abort_reason().empty()
                                   ? tag.abort_reason()
                                   : sensor.abort_reason();
        if (outcome.abort_reason.empty()) outcome.abort_reason = "protocol stalled";
    }
    return outcome;
}

std::size_t recommended_key_length(std::size_t n_k, std::size_t bits_leaked,
                                   std::size_t hash_bits) {
    std::size_t margin = bits_leaked + 2 * hash_bits;
    return n_k > margin ? n_k - margin : 0;
}

} // namespace ska
