#pragma once

#include <cstddef>
#include <memory>

#include "ska/amplify.hpp"
#include "ska/bitstring.hpp"
#include "ska/channel.hpp"
#include "ska/codes.hpp"

namespace ska {

// Shielded OOK channel: a payload travels as s || α(h(s)). Tampering can
// only raise supports, so an altered frame passes verification only when
// the altered payload collides under h, which bounds the undetected
// alteration rate by 2^(-output_length) of the hash family.
struct ShieldedChannelParams {
    std::size_t payload_length;
    HashFamily family;
    HashId id;
    std::shared_ptr<const UnidirectionalCode> code;

    ShieldedChannelParams(std::size_t payload_length, HashFamily family,
                          HashId id,
                          std::shared_ptr<const UnidirectionalCode> code);

    std::size_t tag_length() const { return code->codeword_length(); }
    std::size_t frame_length() const { return payload_length + tag_length(); }
};

struct VerificationVerdict {
    bool accepted = false;
    BitString payload;

    static VerificationVerdict accept(BitString payload) {
        return {true, std::move(payload)};
    }
    static VerificationVerdict failed() { return {}; }
};

OokFrame shielded_send(const BitString& s, const ShieldedChannelParams& params);

// Splits the frame into payload and tag, recomputes the tag from the
// received payload, and accepts only on exact match. Any other frame
// length fails.
VerificationVerdict shielded_receive(const BitString& frame,
                                     const ShieldedChannelParams& params);

// Final transcript cross-check: the peer sends the codeword of its own
// digest state; the verifier compares against the codeword of its own.
// Exact codeword equality doubles as a malformed-frame check.
BitString transcript_check_frame(const TranscriptDigest& digest,
                                 const UnidirectionalCode& code);

VerificationVerdict verify_transcript(const TranscriptDigest& own,
                                      const BitString& received_frame,
                                      const UnidirectionalCode& code);

// Key confirmation: both sides exchange α(h'(K || role tag)) with a
// second hash id derived from the agreed transcript digest, so the key
// itself never travels.
BitString key_confirm_payload(const BitString& key, bool from_tag);

HashId derive_confirmation_id(const HashFamily& confirm_family,
                              const BitString& digest_state);

BitString key_confirm_frame(const BitString& key, bool from_tag,
                            const HashFamily& confirm_family,
                            const HashId& confirm_id,
                            const UnidirectionalCode& code);

} // namespace ska
