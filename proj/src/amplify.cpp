#include "ska/amplify.hpp"

#include <stdexcept>

#include <fmt/core.h>

namespace ska {

HashFamily::HashFamily(std::size_t input_length, std::size_t output_length)
    : input_length(input_length), output_length(output_length) {
    if (input_length == 0 || output_length == 0) {
        throw std::invalid_argument("hash family lengths must be positive");
    }
    if (output_length > 64) {
        throw std::invalid_argument(fmt::format(
            "hash output length {} exceeds the word-packed cap of 64",
            output_length));
    }
}

HashId select_hash(const HashFamily& family, Prng& rng) {
    return HashId{BitString::random(family.seed_length(), rng)};
}

ToeplitzHash::ToeplitzHash(const HashFamily& family, const HashId& id)
    : family_(family) {
    if (id.seed.size() != family.seed_length()) {
        throw std::invalid_argument(fmt::format(
            "hash id seed length {} does not match family seed length {}",
            id.seed.size(), family.seed_length()));
    }
    const std::size_t n = family_.input_length;
    const std::size_t t1 = family_.output_length;
    const std::uint64_t mask =
        t1 == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << t1) - 1;

    // Column j is the seed window starting at offset n-1-j; walking j
    // upward slides the window down one seed bit at a time.
    columns_.resize(n);
    std::uint64_t window = 0;
    for (std::size_t i = 0; i < t1; ++i) {
        window |= static_cast<std::uint64_t>(id.seed[n - 1 + i]) << i;
    }
    columns_[0] = window;
    for (std::size_t j = 1; j < n; ++j) {
        window = ((window << 1) & mask) | id.seed[n - 1 - j];
        columns_[j] = window;
    }
}

BitString ToeplitzHash::operator()(const BitString& input) const {
    if (input.size() > family_.input_length) {
        throw std::invalid_argument(fmt::format(
            "hash input length {} exceeds family input length {}",
            input.size(), family_.input_length));
    }
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < input.size(); ++j) {
        if (input[j]) acc ^= columns_[j];
    }
    BitString out(family_.output_length);
    for (std::size_t i = 0; i < family_.output_length; ++i) {
        out.set(i, static_cast<int>((acc >> i) & 1));
    }
    return out;
}

BitString hash_bits(const HashFamily& family, const HashId& id,
                    const BitString& input) {
    return ToeplitzHash(family, id)(input);
}

BitString amplify(const BitString& shared, const HashFamily& family,
                  const HashId& id, std::size_t output_length) {
    if (output_length > family.output_length) {
        throw std::invalid_argument(fmt::format(
            "key length {} exceeds hash output length {}", output_length,
            family.output_length));
    }
    if (family.output_length > shared.size()) {
        throw std::invalid_argument(fmt::format(
            "hash output length {} exceeds shared material length {}",
            family.output_length, shared.size()));
    }
    return hash_bits(family, id, shared).prefix(output_length);
}

TranscriptDigest::TranscriptDigest(const HashFamily& family, const HashId& id)
    : hasher_(family, id),
      piece_length_(0),
      state_(family.output_length) {
    if (family.input_length <= family.output_length) {
        throw std::invalid_argument(
            "transcript digest needs input length greater than output length");
    }
    piece_length_ = family.input_length - family.output_length;
}

void TranscriptDigest::absorb(const BitString& msg) {
    std::size_t offset = 0;
    do {
        std::size_t take = std::min(piece_length_, msg.size() - offset);
        state_ = hasher_(concat(state_, msg.slice(offset, take)));
        offset += take;
    } while (offset < msg.size());
    ++messages_absorbed_;
}

} // namespace ska
