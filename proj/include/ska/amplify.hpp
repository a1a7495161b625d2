#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ska/bitstring.hpp"
#include "ska/rng.hpp"

namespace ska {

// Toeplitz family over GF(2): matrices with constant diagonals, one seed
// bit per diagonal. XOR-universal with collision probability
// 2^(-output_length) for any fixed pair of distinct inputs.
struct HashFamily {
    std::size_t input_length;
    std::size_t output_length;

    HashFamily(std::size_t input_length, std::size_t output_length);

    std::size_t seed_length() const { return input_length + output_length - 1; }
};

// Identifies one family member. Wire encoding: the raw seed bits,
// length input_length + output_length - 1, most-significant bit first.
struct HashId {
    BitString seed;

    bool operator==(const HashId&) const = default;
};

// Uniformly random family member; deterministic under a fixed rng seed.
HashId select_hash(const HashFamily& family, Prng& rng);

// Precomputed evaluator. Column j of the matrix is a window of the seed,
// packed into one machine word (output_length capped at 64); evaluation
// XORs the columns selected by the input's set bits.
class ToeplitzHash {
public:
    ToeplitzHash(const HashFamily& family, const HashId& id);

    // Inputs shorter than input_length are zero-padded; longer inputs
    // are rejected.
    BitString operator()(const BitString& input) const;

    const HashFamily& family() const { return family_; }

private:
    HashFamily family_;
    std::vector<std::uint64_t> columns_;
};

// One-shot evaluation.
BitString hash_bits(const HashFamily& family, const HashId& id,
                    const BitString& input);

// First output_length bits of the hash of the shared string. Requires
// output_length <= family.output_length <= shared length.
BitString amplify(const BitString& shared, const HashFamily& family,
                  const HashId& id, std::size_t output_length);

// Incremental hash of an ordered message sequence. The accumulator
// starts all-zeros; each absorb splits the message into pieces of
// (input_length - output_length) bits, zero-padding the last, and folds
// state <- h(state || piece). An empty message still advances the state
// by one fold. Requires input_length > output_length.
class TranscriptDigest {
public:
    TranscriptDigest(const HashFamily& family, const HashId& id);

    void absorb(const BitString& msg);

    const BitString& state() const { return state_; }
    std::size_t messages_absorbed() const { return messages_absorbed_; }

private:
    ToeplitzHash hasher_;
    std::size_t piece_length_;
    BitString state_;
    std::size_t messages_absorbed_ = 0;
};

} // namespace ska
