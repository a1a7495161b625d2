#include "ska/integrity.hpp"

#include <stdexcept>

#include <fmt/core.h>

#include "ska/rng.hpp"

namespace ska {

namespace {

constexpr std::uint64_t kConfirmationStream = 0x4b43;

} // namespace

ShieldedChannelParams::ShieldedChannelParams(
    std::size_t payload_length, HashFamily family, HashId id,
    std::shared_ptr<const UnidirectionalCode> code)
    : payload_length(payload_length),
      family(family),
      id(std::move(id)),
      code(std::move(code)) {
    if (!this->code) {
        throw std::invalid_argument("shielded channel needs a code");
    }
    if (family.input_length != payload_length) {
        throw std::invalid_argument(fmt::format(
            "hash input length {} does not match payload length {}",
            family.input_length, payload_length));
    }
    if (payload_length < family.output_length) {
        throw std::invalid_argument(fmt::format(
            "payload length {} is below the hash length {}", payload_length,
            family.output_length));
    }
    if (this->code->source_length() != family.output_length) {
        throw std::invalid_argument(fmt::format(
            "code source length {} does not match hash length {}",
            this->code->source_length(), family.output_length));
    }
    if (this->code->codeword_length() < family.output_length) {
        throw std::invalid_argument("codeword shorter than the hash length");
    }
}

OokFrame shielded_send(const BitString& s, const ShieldedChannelParams& params) {
    if (s.size() != params.payload_length) {
        throw std::invalid_argument(fmt::format(
            "payload length {} does not match configured length {}", s.size(),
            params.payload_length));
    }
    BitString tag = params.code->encode(hash_bits(params.family, params.id, s));
    return OokFrame{concat(s, tag)};
}

VerificationVerdict shielded_receive(const BitString& frame,
                                     const ShieldedChannelParams& params) {
    if (frame.size() != params.frame_length()) {
        return VerificationVerdict::failed();
    }
    BitString payload = frame.prefix(params.payload_length);
    BitString tag = frame.slice(params.payload_length, params.tag_length());
    BitString expected =
        params.code->encode(hash_bits(params.family, params.id, payload));
    if (tag != expected) return VerificationVerdict::failed();
    return VerificationVerdict::accept(std::move(payload));
}

BitString transcript_check_frame(const TranscriptDigest& digest,
                                 const UnidirectionalCode& code) {
    return code.encode(digest.state());
}

VerificationVerdict verify_transcript(const TranscriptDigest& own,
                                      const BitString& received_frame,
                                      const UnidirectionalCode& code) {
    if (received_frame != code.encode(own.state())) {
        return VerificationVerdict::failed();
    }
    return VerificationVerdict::accept(own.state());
}

BitString key_confirm_payload(const BitString& key, bool from_tag) {
    return concat(key, BitString::from_u64(from_tag ? 0x41 : 0x42, 8));
}

HashId derive_confirmation_id(const HashFamily& confirm_family,
                              const BitString& digest_state) {
    Prng rng(derive_seed(digest_state.to_u64(), kConfirmationStream));
    return select_hash(confirm_family, rng);
}

BitString key_confirm_frame(const BitString& key, bool from_tag,
                            const HashFamily& confirm_family,
                            const HashId& confirm_id,
                            const UnidirectionalCode& code) {
    return code.encode(hash_bits(confirm_family, confirm_id,
                                 key_confirm_payload(key, from_tag)));
}

} // namespace ska
