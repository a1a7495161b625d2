#include "ska/bitstring.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ska {

BitString BitString::from_string(std::string_view s) {
    BitString out;
    out.bits_.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("BitString::from_string: symbol must be '0' or '1'");
        }
        out.bits_.push_back(c == '1' ? 1 : 0);
    }
    return out;
}

BitString BitString::random(std::size_t n, Prng& rng) {
    BitString out;
    out.bits_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.bits_[i] = static_cast<std::uint8_t>(rng.bit());
    }
    return out;
}

BitString BitString::from_u64(std::uint64_t value, std::size_t width) {
    if (width > 64) {
        throw std::invalid_argument("BitString::from_u64: width > 64");
    }
    if (width < 64 && (value >> width) != 0) {
        throw std::invalid_argument("BitString::from_u64: value does not fit width");
    }
    BitString out;
    out.bits_.resize(width);
    for (std::size_t i = 0; i < width; ++i) {
        out.bits_[i] = static_cast<std::uint8_t>((value >> (width - 1 - i)) & 1u);
    }
    return out;
}

void BitString::append(const BitString& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

BitString BitString::slice(std::size_t pos, std::size_t len) const {
    if (pos + len > bits_.size()) {
        throw std::out_of_range("BitString::slice: range exceeds length");
    }
    BitString out;
    out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(pos),
                     bits_.begin() + static_cast<std::ptrdiff_t>(pos + len));
    return out;
}

std::size_t BitString::weight() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

std::size_t BitString::hamming_distance(const BitString& other) const {
    if (size() != other.size()) {
        throw std::invalid_argument("hamming_distance: length mismatch");
    }
    std::size_t d = 0;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        d += bits_[i] != other.bits_[i];
    }
    return d;
}

bool BitString::support_subset_of(const BitString& other) const {
    if (size() != other.size()) {
        throw std::invalid_argument("support_subset_of: length mismatch");
    }
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i] && !other.bits_[i]) {
            return false;
        }
    }
    return true;
}

std::uint64_t BitString::to_u64() const {
    if (size() > 64) {
        throw std::invalid_argument("BitString::to_u64: length > 64");
    }
    std::uint64_t v = 0;
    for (std::uint8_t b : bits_) {
        v = (v << 1) | b;
    }
    return v;
}

std::string BitString::to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (std::uint8_t b : bits_) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

BitString operator^(const BitString& a, const BitString& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("BitString xor: length mismatch");
    }
    BitString out;
    out.bits_.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.bits_[i] = a.bits_[i] ^ b.bits_[i];
    }
    return out;
}

BitString operator|(const BitString& a, const BitString& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("BitString or: length mismatch");
    }
    BitString out;
    out.bits_.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.bits_[i] = a.bits_[i] | b.bits_[i];
    }
    return out;
}

BitString concat(const BitString& a, const BitString& b) {
    BitString out = a;
    out.append(b);
    return out;
}

} // namespace ska
