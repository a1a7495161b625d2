#pragma once

#include <cstddef>
#include <optional>

#include "ska/bitstring.hpp"

namespace ska {

// A code whose codewords have pairwise non-nested supports. On a channel
// where errors can only turn 0 into 1, any tampering that changes the
// support of a codeword can never produce another codeword, so it is
// always detected.
class UnidirectionalCode {
public:
    virtual ~UnidirectionalCode() = default;

    virtual std::size_t source_length() const = 0;
    virtual std::size_t codeword_length() const = 0;
    virtual BitString encode(const BitString& src) const = 0;
    // Returns the decoded source word, or nullopt when the word is not a
    // codeword (tampering or malformed frame).
    virtual std::optional<BitString> verify(const BitString& word) const = 0;
};

// Manchester rule: 1 -> 10, 0 -> 01. Works on any source length.
BitString manchester_encode(const BitString& src);

// Accepts iff the length is even and every consecutive pair is 10 or 01.
// Odd-length frames are rejected.
std::optional<BitString> manchester_verify(const BitString& word);

struct BergerParams {
    std::size_t l;
    std::size_t r;

    // r = ceil(log2(l + 1)): the weight of an l-bit word ranges over
    // 0..l, so l itself must be representable.
    explicit BergerParams(std::size_t l);
};

// Appends the bitwise complement of the r-bit big-endian weight of src.
BitString berger_encode(const BitString& src, const BergerParams& params);

// Accepts iff the tail is the complemented binary weight of the head;
// returns the head on accept.
std::optional<BitString> berger_verify(const BitString& word,
                                       const BergerParams& params);

class ManchesterCode final : public UnidirectionalCode {
public:
    explicit ManchesterCode(std::size_t l) : l_(l) {}

    std::size_t source_length() const override { return l_; }
    std::size_t codeword_length() const override { return 2 * l_; }
    BitString encode(const BitString& src) const override;
    std::optional<BitString> verify(const BitString& word) const override;

private:
    std::size_t l_;
};

class BergerCode final : public UnidirectionalCode {
public:
    explicit BergerCode(std::size_t l) : params_(l) {}
    explicit BergerCode(BergerParams params) : params_(params) {}

    std::size_t source_length() const override { return params_.l; }
    std::size_t codeword_length() const override { return params_.l + params_.r; }
    BitString encode(const BitString& src) const override;
    std::optional<BitString> verify(const BitString& word) const override;

    const BergerParams& params() const { return params_; }

private:
    BergerParams params_;
};

// Brute-force check that no pair of distinct codewords has nested
// supports. Enumerates all 2^l source words; guarded to l <= 16.
bool check_non_inclusive_supports(const UnidirectionalCode& code);

} // namespace ska
