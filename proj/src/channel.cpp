#include "ska/channel.hpp"

#include <stdexcept>

#include <fmt/core.h>

namespace ska {

BscParams::BscParams(double p, std::uint64_t rng_seed)
    : p(p), rng_seed(rng_seed) {
    if (!(p >= 0.0 && p < 0.5)) {
        throw std::invalid_argument(
            fmt::format("BSC crossover probability must lie in [0, 0.5), got {}", p));
    }
}

BitString BscChannel::transmit(const BitString& msg) {
    BitString out = msg;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (rng_.bernoulli(p_)) out.flip(i);
    }
    return out;
}

BitString transmit_bsc(const BitString& msg, const BscParams& params) {
    BscChannel ch(params);
    return ch.transmit(msg);
}

BitString transmit_ook(const OokFrame& frame, const BitString& tamper_mask) {
    if (tamper_mask.size() != frame.payload.size()) {
        throw std::invalid_argument(fmt::format(
            "tamper mask length {} does not match frame length {}",
            tamper_mask.size(), frame.payload.size()));
    }
    return frame.payload | tamper_mask;
}

} // namespace ska
