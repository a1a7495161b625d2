#include "ska/codes.hpp"

#include <bit>
#include <stdexcept>
#include <vector>

#include <fmt/core.h>

namespace ska {

BitString manchester_encode(const BitString& src) {
    BitString out;
    out.reserve(2 * src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        out.push_back(src[i]);
        out.push_back(src[i] ^ 1);
    }
    return out;
}

std::optional<BitString> manchester_verify(const BitString& word) {
    if (word.size() % 2 != 0) return std::nullopt;
    BitString src;
    src.reserve(word.size() / 2);
    for (std::size_t i = 0; i < word.size(); i += 2) {
        if (word[i] == word[i + 1]) return std::nullopt;
        src.push_back(word[i]);
    }
    return src;
}

BergerParams::BergerParams(std::size_t l) : l(l), r(std::bit_width(l)) {
    if (l == 0) {
        throw std::invalid_argument("Berger source length must be positive");
    }
}

BitString berger_encode(const BitString& src, const BergerParams& params) {
    if (src.size() != params.l) {
        throw std::invalid_argument(fmt::format(
            "Berger source length {} does not match configured length {}",
            src.size(), params.l));
    }
    std::uint64_t complement = ((std::uint64_t{1} << params.r) - 1) - src.weight();
    return concat(src, BitString::from_u64(complement, params.r));
}

std::optional<BitString> berger_verify(const BitString& word,
                                       const BergerParams& params) {
    if (word.size() != params.l + params.r) return std::nullopt;
    BitString head = word.prefix(params.l);
    BitString tail = word.slice(params.l, params.r);
    std::uint64_t expected =
        ((std::uint64_t{1} << params.r) - 1) - head.weight();
    if (tail.to_u64() != expected) return std::nullopt;
    return head;
}

BitString ManchesterCode::encode(const BitString& src) const {
    if (src.size() != l_) {
        throw std::invalid_argument(fmt::format(
            "Manchester source length {} does not match configured length {}",
            src.size(), l_));
    }
    return manchester_encode(src);
}

std::optional<BitString> ManchesterCode::verify(const BitString& word) const {
    if (word.size() != 2 * l_) return std::nullopt;
    return manchester_verify(word);
}

BitString BergerCode::encode(const BitString& src) const {
    return berger_encode(src, params_);
}

std::optional<BitString> BergerCode::verify(const BitString& word) const {
    return berger_verify(word, params_);
}

namespace {

// Packs codeword supports into 64-bit words so the pairwise subset scan
// stays cheap even at the enumeration bound.
bool support_subset(const std::uint64_t* a, const std::uint64_t* b,
                    std::size_t words) {
    for (std::size_t w = 0; w < words; ++w) {
        if ((a[w] & ~b[w]) != 0) return false;
    }
    return true;
}

} // namespace

bool check_non_inclusive_supports(const UnidirectionalCode& code) {
    const std::size_t l = code.source_length();
    if (l > 16) {
        throw std::invalid_argument(fmt::format(
            "source length {} exceeds the enumeration bound of 16", l));
    }
    const std::size_t n = code.codeword_length();
    const std::size_t words = (n + 63) / 64;
    const std::uint64_t count = std::uint64_t{1} << l;

    std::vector<std::uint64_t> packed(count * words, 0);
    for (std::uint64_t m = 0; m < count; ++m) {
        BitString cw = code.encode(BitString::from_u64(m, l));
        for (std::size_t i = 0; i < cw.size(); ++i) {
            if (cw[i]) packed[m * words + i / 64] |= std::uint64_t{1} << (i % 64);
        }
    }
    for (std::uint64_t i = 0; i < count; ++i) {
        for (std::uint64_t j = i + 1; j < count; ++j) {
            const std::uint64_t* a = &packed[i * words];
            const std::uint64_t* b = &packed[j * words];
            if (support_subset(a, b, words) || support_subset(b, a, words)) {
                return false;
            }
        }
    }
    return true;
}

} // namespace ska
