#pragma once

#include <cstdint>

#include "ska/bitstring.hpp"
#include "ska/rng.hpp"

namespace ska {

// Binary symmetric channel parameters. p must stay below 0.5: at and
// beyond that point the receiver holds no advantage over a coin flip and
// the distillation analysis no longer applies.
struct BscParams {
    double p = 0.0;
    std::uint64_t rng_seed = 0;

    BscParams(double p, std::uint64_t rng_seed);
};

// Stateful BSC. Consecutive transmissions advance one seeded stream;
// distinct simulation trials use distinct channel instances.
class BscChannel {
public:
    explicit BscChannel(const BscParams& params)
        : p_(params.p), rng_(params.rng_seed) {}

    BitString transmit(const BitString& msg);

    double p() const { return p_; }

private:
    double p_;
    Prng rng_;
};

// One-shot transmission through a fresh stream seeded from params.rng_seed.
// Bit i of the result is msg[i] flipped independently with probability p.
BitString transmit_bsc(const BitString& msg, const BscParams& params);

// On-air frame for on-off keying: 1 = signal present during one period,
// 0 = signal absent. Energy can be added to the air but not removed, so
// an adversary can only turn 0 into 1.
struct OokFrame {
    BitString payload;
};

// Applies a 0->1 tamper mask: the pointwise OR of payload and mask.
// supp(payload) is always a subset of supp(result). The mask length must
// equal the frame length.
BitString transmit_ook(const OokFrame& frame, const BitString& tamper_mask);

// Error rate of two independent BSC stages in series.
inline double compose_error_rates(double p, double q) {
    return p + q - 2.0 * p * q;
}

} // namespace ska
