#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ska/amplify.hpp"
#include "ska/bitstring.hpp"
#include "ska/cascade.hpp"
#include "ska/codes.hpp"
#include "ska/rng.hpp"

namespace ska {

struct AdversaryStrategy;

struct ProtocolConfig {
    std::size_t n0 = 4096;
    double p_ab = 0.1;
    double p_ae = 0.15;
    std::size_t distill_rounds = 2;
    std::size_t cascade_passes = 4;
    // 0 selects the first-pass block size from the analytic error
    // estimate at runtime.
    std::size_t initial_block_size = 0;
    std::size_t hash_bits = 32;
    std::size_t key_length = 32;
    std::string code_name = "berger";
    std::string adversary = "passive";
    std::uint64_t master_seed = 1;
    std::size_t trials = 1;

    void validate() const;

    // Hash family input width, shared by both ends: wide enough for the
    // reconciled string and for a useful digest piece size.
    std::size_t hash_input_length() const;

    // First-pass cascade block size for a reconciled length of n_k.
    // The auto rule keeps at least four blocks so the shuffled passes
    // can split even error counts.
    std::size_t block_size_for(std::size_t n_k) const;

    std::shared_ptr<const UnidirectionalCode> make_code() const;
};

enum class Phase {
    ChooseHash,
    RawExchange,
    Distill,
    Reconcile,
    Amplify,
    AnnounceHash,
    IntegrityVerify,
    Done,
    Abort,
};

enum class MessageType {
    RawStream,        // sensor -> tag, noisy channel
    DistillParity,    // public, alternating
    CascadeSeeds,     // tag -> sensor, public
    CascadeTraffic,   // public, alternating
    HashAnnounce,     // tag -> sensor, public
    TranscriptCheck,  // sensor -> tag, public
    KeyConfirmTag,    // tag -> sensor, public
    KeyConfirmSensor, // sensor -> tag, public
    Failure,          // either direction, unprotected control message
};

struct Message {
    MessageType type;
    BitString payload;
};

// True for messages that transit the public on-off-keyed channel and
// enter the transcript when they precede the check step.
bool on_public_channel(MessageType type);

const char* to_string(Phase phase);
const char* to_string(MessageType type);

// The verifier end (A). Chooses the hash locally up front, receives the
// raw stream, drives distillation and reconciliation, announces the
// hash id, then verifies the sensor's transcript check and confirms the
// key. Keeps only a rolling transcript digest.
class TagDevice {
public:
    TagDevice(const ProtocolConfig& config, std::uint64_t hash_stream_seed,
              std::uint64_t shuffle_stream_seed);

    std::vector<Message> step(const Message& incoming);

    Phase phase() const { return phase_; }
    const HashId& hash_id() const { return id_; }
    const BitString& raw_bits() const { return raw_bits_; }
    const BitString& distilled_bits() const { return bits_; }
    const BitString& key() const { return key_; }
    std::size_t parity_bits_seen() const { return parity_bits_; }
    const std::string& abort_reason() const { return abort_reason_; }

private:
    std::vector<Message> fail(std::string reason);
    std::vector<Message> finish_distill();
    std::vector<Message> announce();

    ProtocolConfig config_;
    std::shared_ptr<const UnidirectionalCode> code_;
    HashFamily family_;
    HashFamily confirm_family_;
    HashId id_;
    TranscriptDigest digest_;
    Prng shuffle_stream_;
    Phase phase_ = Phase::ChooseHash;
    std::size_t round_ = 0;
    BitString raw_bits_;
    BitString bits_;
    std::optional<CascadeResponder> responder_;
    BitString key_;
    HashId confirm_id_;
    bool awaiting_confirm_ = false;
    std::size_t parity_bits_ = 0;
    std::string abort_reason_;
};

// The measuring end (B). Streams the raw bits, follows distillation and
// reconciliation, learns the hash id last, then sends the transcript
// check and answers key confirmation. Stores the full transcript since
// it cannot digest incrementally before the id arrives.
class SensorDevice {
public:
    SensorDevice(const ProtocolConfig& config, std::uint64_t raw_stream_seed);

    std::vector<Message> start();
    std::vector<Message> step(const Message& incoming);

    Phase phase() const { return phase_; }
    const BitString& raw_bits() const { return raw_bits_; }
    const BitString& pre_cascade_bits() const { return pre_cascade_bits_; }
    const BitString& bits() const { return bits_; }
    const BitString& key() const { return key_; }
    const std::string& abort_reason() const { return abort_reason_; }

private:
    std::vector<Message> fail(std::string reason);

    ProtocolConfig config_;
    std::shared_ptr<const UnidirectionalCode> code_;
    HashFamily family_;
    HashFamily confirm_family_;
    Phase phase_ = Phase::RawExchange;
    std::size_t round_ = 0;
    BitString raw_bits_;
    BitString bits_;
    BitString pre_cascade_bits_;
    std::vector<BitString> transcript_;
    std::optional<CascadeCorrector> corrector_;
    HashId id_;
    BitString key_;
    HashId confirm_id_;
    std::string abort_reason_;
};

enum class Verdict { Success, Abort, UndetectedMismatch };

const char* to_string(Verdict verdict);

struct ProtocolOutcome {
    Verdict verdict = Verdict::Abort;
    bool key_match = false;
    bool detected = false;
    BitString key_a;
    BitString key_b;
    std::size_t bits_leaked = 0;
    double eve_agreement = -1.0;
    double p_ab_effective = 0.0;
    std::size_t n_k = 0;
    double raw_error_rate = -1.0;
    double distilled_error_rate = -1.0;
    double residual_error_rate = -1.0;
    std::string abort_reason;
};

// Executes one full run: raw exchange over the noisy channel (jamming
// raises its effective error rate), public discussion over the OOK
// channel (tamperable), verification, key confirmation. Deterministic
// under a fixed (config, adversary, trial_seed).
ProtocolOutcome run_protocol(const ProtocolConfig& config,
                             const AdversaryStrategy& adversary,
                             std::uint64_t trial_seed);

// Leakage-aware sizing guidance: reconciled bits minus revealed parity
// bits minus a two-hash-length security margin.
std::size_t recommended_key_length(std::size_t n_k, std::size_t bits_leaked,
                                   std::size_t hash_bits);

} // namespace ska
