#include "ska/distill.hpp"

#include <stdexcept>

#include <fmt/core.h>

namespace ska {

DistillConfig::DistillConfig(std::size_t rounds) : rounds(rounds) {
    if (rounds == 0) {
        throw std::invalid_argument("distillation needs at least one round");
    }
}

BitString pair_parities(const BitString& bits) {
    BitString out;
    out.reserve(bits.size() / 2);
    for (std::size_t i = 0; i + 1 < bits.size(); i += 2) {
        out.push_back(bits[i] ^ bits[i + 1]);
    }
    return out;
}

std::vector<std::size_t> kept_pair_indices(const BitString& a_parities,
                                           const BitString& b_parities) {
    if (a_parities.size() != b_parities.size()) {
        throw std::invalid_argument(fmt::format(
            "parity string lengths differ: {} vs {}", a_parities.size(),
            b_parities.size()));
    }
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < a_parities.size(); ++j) {
        if (a_parities[j] == b_parities[j]) kept.push_back(j);
    }
    return kept;
}

BitString keep_first_bits(const BitString& bits,
                          const std::vector<std::size_t>& pair_indices) {
    BitString out;
    out.reserve(pair_indices.size());
    for (std::size_t j : pair_indices) {
        if (2 * j >= bits.size()) {
            throw std::out_of_range(fmt::format(
                "pair {} starts past the end of {} bits", j, bits.size()));
        }
        out.push_back(bits[2 * j]);
    }
    return out;
}

DistillRoundResult distill_round(const BitString& a_bits, const BitString& b_bits) {
    if (a_bits.size() != b_bits.size()) {
        throw std::invalid_argument(fmt::format(
            "input lengths differ: {} vs {}", a_bits.size(), b_bits.size()));
    }
    DistillRoundResult round;
    round.input_length = a_bits.size();
    BitString a_par = pair_parities(a_bits);
    BitString b_par = pair_parities(b_bits);
    round.public_msgs.push_back(a_par);
    round.public_msgs.push_back(b_par);
    std::vector<std::size_t> pairs = kept_pair_indices(a_par, b_par);
    round.kept_indices.reserve(pairs.size());
    for (std::size_t j : pairs) round.kept_indices.push_back(2 * j);
    round.a_kept = keep_first_bits(a_bits, pairs);
    round.b_kept = keep_first_bits(b_bits, pairs);
    return round;
}

double post_round_error_rate(double p) {
    if (!(p >= 0.0 && p < 0.5)) {
        throw std::invalid_argument(
            fmt::format("error rate must lie in [0, 0.5), got {}", p));
    }
    double q = 1.0 - p;
    return p * p / (p * p + q * q);
}

double iterated_error_rate(double p, std::size_t rounds) {
    double r = p;
    for (std::size_t i = 0; i < rounds; ++i) r = post_round_error_rate(r);
    return r;
}

} // namespace ska
