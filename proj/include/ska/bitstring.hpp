#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ska/rng.hpp"

namespace ska {

// Ordered sequence of binary symbols. Every channel, code, hash and
// protocol message in the library is one of these.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t n, int fill = 0)
        : bits_(n, fill ? 1 : 0) {}

    // Parse from a string of '0'/'1' characters, e.g. "1011".
    static BitString from_string(std::string_view s);

    static BitString random(std::size_t n, Prng& rng);

    // Big-endian: bit 0 of the result is the most significant of `value`.
    static BitString from_u64(std::uint64_t value, std::size_t width);

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    int operator[](std::size_t i) const { return bits_[i]; }
    void set(std::size_t i, int v) { bits_[i] = v ? 1 : 0; }
    void flip(std::size_t i) { bits_[i] ^= 1; }

    void reserve(std::size_t n) { bits_.reserve(n); }
    void push_back(int v) { bits_.push_back(v ? 1 : 0); }
    void append(const BitString& other);

    BitString slice(std::size_t pos, std::size_t len) const;
    BitString prefix(std::size_t len) const { return slice(0, len); }

    std::size_t weight() const;
    std::size_t hamming_distance(const BitString& other) const;

    // supp(*this) is a subset of supp(other); lengths must match.
    bool support_subset_of(const BitString& other) const;

    // Big-endian pack; size() must be <= 64.
    std::uint64_t to_u64() const;

    std::string to_string() const;

    friend BitString operator^(const BitString& a, const BitString& b);
    friend BitString operator|(const BitString& a, const BitString& b);
    friend bool operator==(const BitString& a, const BitString& b) = default;

private:
    std::vector<std::uint8_t> bits_;
};

BitString concat(const BitString& a, const BitString& b);

} // namespace ska
