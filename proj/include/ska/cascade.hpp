#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <utility>
#include <vector>

#include "ska/bitstring.hpp"

namespace ska {

struct CascadeConfig {
    std::size_t passes;
    std::size_t initial_block_size;
    // Public permutation seeds, one per pass beyond the first. They
    // transit the public channel so both sides shuffle identically.
    std::vector<std::uint64_t> shuffle_seeds;

    CascadeConfig(std::size_t passes, std::size_t initial_block_size,
                  std::vector<std::uint64_t> shuffle_seeds);
};

// Classic first-pass block size heuristic, ceil(0.73 / p_est), clamped
// to a sane range for degenerate estimates.
std::size_t initial_block_size_for(double p_est);

// XOR of bits[lo..hi).
int block_parity(const BitString& bits, std::size_t lo, std::size_t hi);

// Fisher-Yates permutation of 0..n-1 drawn from a public seed.
std::vector<std::size_t> seeded_shuffle(std::size_t n, std::uint64_t seed);

using ParityResponder = std::function<int(std::size_t lo, std::size_t hi)>;

// Locates one differing position inside a block whose parities are
// already known to mismatch, and flips it in b_bits. Each halving step
// appends two one-bit messages to msgs: the responder's left-half
// parity, then the corrector's. Returns the flipped position.
std::size_t binary_search_correct(const ParityResponder& a_view,
                                  BitString& b_bits, std::size_t lo,
                                  std::size_t hi,
                                  std::vector<BitString>& msgs);

struct ReconciliationResult {
    BitString corrected_b;
    std::vector<BitString> parity_msgs;
    std::size_t bits_leaked = 0;
};

// Shared block geometry: per-pass permutations (pass 1 is the identity)
// and doubling block sizes.
struct CascadeGeometry {
    std::size_t n = 0;
    std::size_t passes = 0;
    std::size_t initial_block_size = 0;
    std::vector<std::vector<std::size_t>> perms;
    std::vector<std::vector<std::size_t>> inv_perms;

    CascadeGeometry(std::size_t n, const CascadeConfig& config);

    std::size_t block_size(std::size_t pass) const;
    std::size_t block_count(std::size_t pass) const;
    std::pair<std::size_t, std::size_t> block_range(std::size_t pass,
                                                    std::size_t block) const;
    std::size_t block_of(std::size_t pass, std::size_t real_pos) const;
    // Parity of bits over a permuted index range of the given pass.
    int parity(const BitString& bits, std::size_t pass, std::size_t lo,
               std::size_t hi) const;
};

struct CascadeStep {
    enum class Kind { Reply, Done, Fail };
    Kind kind = Kind::Fail;
    BitString message;
};

// The two ends of the interactive exchange, driven one message at a
// time so the protocol layer can route the traffic over a real channel.
// Both ends mirror the same deterministic schedule: the responder sends
// a pass parity vector, the corrector answers a mismatch bitmap (empty
// when clean), then each pending block is binary-searched smallest
// first with one-bit parity queries. Every correction toggles mismatch
// flags in all started passes on both sides, which is what cascades
// earlier passes. A flip budget guards against livelock when the
// traffic is tampered with; exceeding it fails the exchange.

class CascadeResponder {
public:
    CascadeResponder(BitString reference_bits, const CascadeConfig& config);

    BitString initial_message();
    CascadeStep on_message(const BitString& from_peer);

    bool done() const { return state_ == State::Done; }
    bool failed() const { return state_ == State::Failed; }
    // Positions the corrector flipped, derived from the exchange.
    const std::vector<std::size_t>& derived_flips() const { return flips_; }

private:
    enum class State { Start, ExpectBitmap, ExpectLevelReply, Done, Failed };

    BitString pass_parities(std::size_t pass) const;
    CascadeStep advance();
    CascadeStep fail();
    bool record_flip(std::size_t real_pos);

    BitString bits_;
    CascadeGeometry geom_;
    State state_ = State::Start;
    std::size_t pass_index_ = 0;
    std::set<std::pair<std::size_t, std::size_t>> pending_;
    bool search_active_ = false;
    std::size_t cur_pass_ = 0;
    std::size_t cur_lo_ = 0;
    std::size_t cur_hi_ = 0;
    int sent_left_parity_ = 0;
    std::vector<std::size_t> flips_;
    std::size_t flip_cap_ = 0;
};

class CascadeCorrector {
public:
    CascadeCorrector(BitString bits, const CascadeConfig& config);

    CascadeStep on_message(const BitString& from_peer);

    bool done() const { return state_ == State::Done; }
    bool failed() const { return state_ == State::Failed; }
    const BitString& bits() const { return bits_; }
    const std::vector<std::size_t>& flips() const { return flips_; }

private:
    enum class State { ExpectPassVector, ExpectLevelBit, Done, Failed };

    CascadeStep fail();
    void apply_flip(std::size_t real_pos);
    void advance();

    BitString bits_;
    CascadeGeometry geom_;
    State state_ = State::ExpectPassVector;
    std::size_t pass_index_ = 0;
    std::set<std::pair<std::size_t, std::size_t>> pending_;
    bool search_active_ = false;
    std::size_t cur_pass_ = 0;
    std::size_t cur_lo_ = 0;
    std::size_t cur_hi_ = 0;
    std::vector<std::size_t> flips_;
    std::size_t flip_cap_ = 0;
    bool flip_budget_blown_ = false;
};

// Runs the full exchange in-process between honest ends. parity_msgs
// holds every message in wire order; bits_leaked is their total length.
ReconciliationResult run_cascade(const BitString& a_bits,
                                 const BitString& b_bits,
                                 const CascadeConfig& config);

struct CascadeReplay {
    std::vector<std::size_t> flips;
    std::size_t messages_consumed = 0;
};

// Replays an exchange from the public messages alone, starting at
// offset, and returns the corrector's flip positions in order. This is
// exactly what an eavesdropper can reconstruct. Throws if the messages
// do not parse as a complete exchange.
CascadeReplay replay_cascade_messages(std::size_t n,
                                      const CascadeConfig& config,
                                      const std::vector<BitString>& msgs,
                                      std::size_t offset = 0);

// Replay requiring that msgs is exactly one whole exchange.
std::vector<std::size_t> derive_flips_from_messages(
    std::size_t n, const CascadeConfig& config,
    const std::vector<BitString>& msgs);

} // namespace ska
