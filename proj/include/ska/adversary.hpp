#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "ska/bitstring.hpp"
#include "ska/rng.hpp"

namespace ska {

struct ProtocolConfig;

enum class AdversaryKind { Passive, OokTamper, Jammer };

// Maps an observed OOK frame to a 0->1 mask. Masks only ever set bits
// where the frame carries a 0; setting an already-lit bit is a no-op on
// the air anyway.
class TamperPolicy {
public:
    virtual ~TamperPolicy() = default;

    virtual BitString mask_for(const BitString& frame, Prng& rng) const = 0;

    // On-the-fly variant: the mask bit for position i may not depend on
    // frame bits after i. Pointwise policies behave identically; policies
    // that need the whole frame up front reject.
    virtual BitString streaming_mask_for(const BitString& frame,
                                         Prng& rng) const {
        return mask_for(frame, rng);
    }
};

class FlipEachZero final : public TamperPolicy {
public:
    explicit FlipEachZero(double q);
    BitString mask_for(const BitString& frame, Prng& rng) const override;

private:
    double q_;
};

class FlipKRandomZeros final : public TamperPolicy {
public:
    explicit FlipKRandomZeros(std::size_t k) : k_(k) {}
    BitString mask_for(const BitString& frame, Prng& rng) const override;
    BitString streaming_mask_for(const BitString& frame,
                                 Prng& rng) const override;

private:
    std::size_t k_;
};

class FlipAllZeros final : public TamperPolicy {
public:
    BitString mask_for(const BitString& frame, Prng& rng) const override;
};

class TargetedRegion final : public TamperPolicy {
public:
    TargetedRegion(std::size_t lo, std::size_t hi, double q);
    BitString mask_for(const BitString& frame, Prng& rng) const override;

private:
    std::size_t lo_;
    std::size_t hi_;
    double q_;
};

struct AdversaryStrategy {
    AdversaryKind kind = AdversaryKind::Passive;
    std::shared_ptr<const TamperPolicy> policy;
    double extra_noise = 0.0;

    static AdversaryStrategy passive();
    static AdversaryStrategy ook_tamper(std::shared_ptr<const TamperPolicy> policy);
    static AdversaryStrategy jammer(double extra_noise);
};

// Eve's tap of the raw stream: an independent BSC at p_ae.
BitString eavesdrop(const BitString& msg, double p_ae, Prng& rng);

// Applies the strategy's mask to an OOK frame. Passive and jamming
// strategies cannot tamper and are rejected.
BitString tamper(const AdversaryStrategy& strategy, const BitString& frame,
                 Prng& rng);

BitString tamper_streaming(const AdversaryStrategy& strategy,
                           const BitString& frame, Prng& rng);

// Everything Eve can hear: the raw stream through her own noisy channel
// and every public-channel frame exactly as transmitted (post-tamper).
// kept_positions records which raw positions survived distillation, as
// reconstructed during the key guess.
struct EveView {
    BitString observed_cp;
    std::vector<BitString> observed_c0;
    std::vector<std::size_t> kept_positions;
};

// Baseline attacker: replays the public distillation keep-decisions and
// cascade corrections on Eve's own noisy copy, then applies the
// announced hash id. Throws when the observed messages do not parse as
// a completed run.
BitString eve_key_guess(EveView& view, const ProtocolConfig& config);

} // namespace ska
