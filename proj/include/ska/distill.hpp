#pragma once

#include <cstddef>
#include <vector>

#include "ska/bitstring.hpp"

namespace ska {

struct DistillConfig {
    std::size_t rounds = 2;

    explicit DistillConfig(std::size_t rounds = 2);
};

// One round of bit pair iteration between two sides. public_msgs holds
// both parity strings in send order (A's, then B's); they transit the
// public channel and enter the transcript.
struct DistillRoundResult {
    std::size_t input_length = 0;
    std::vector<std::size_t> kept_indices;
    BitString a_kept;
    BitString b_kept;
    std::vector<BitString> public_msgs;
};

// Parity of each consecutive disjoint pair: output bit j is
// bits[2j] XOR bits[2j+1]. A trailing unpaired bit is discarded.
BitString pair_parities(const BitString& bits);

// Pair indices at which the two parity strings agree.
std::vector<std::size_t> kept_pair_indices(const BitString& a_parities,
                                           const BitString& b_parities);

// First bit of each surviving pair, in pair order.
BitString keep_first_bits(const BitString& bits,
                          const std::vector<std::size_t>& pair_indices);

DistillRoundResult distill_round(const BitString& a_bits, const BitString& b_bits);

// Probability that a kept bit still differs, given the pair parities
// matched under i.i.d. bit errors at rate p: p^2 / (p^2 + (1-p)^2).
double post_round_error_rate(double p);

// post_round_error_rate iterated k times.
double iterated_error_rate(double p, std::size_t rounds);

} // namespace ska
