#include <doctest.h>

#include <memory>
#include <stdexcept>

#include "ska/amplify.hpp"
#include "ska/bitstring.hpp"
#include "ska/codes.hpp"
#include "ska/integrity.hpp"
#include "ska/rng.hpp"

using namespace ska;

namespace {

ShieldedChannelParams make_params(std::size_t payload_length, std::size_t t1,
                                  std::uint64_t seed) {
    HashFamily family(payload_length, t1);
    Prng rng(seed);
    HashId id = select_hash(family, rng);
    return ShieldedChannelParams(payload_length, family, id,
                                 std::make_shared<BergerCode>(t1));
}

} // namespace

TEST_CASE("channel parameters are validated") {
    HashFamily family(32, 8);
    Prng rng(1);
    HashId id = select_hash(family, rng);
    auto code = std::make_shared<BergerCode>(8);

    CHECK_NOTHROW(ShieldedChannelParams(32, family, id, code));
    // family must hash exactly the payload
    CHECK_THROWS_AS(ShieldedChannelParams(16, family, id, code),
                    std::invalid_argument);
    // code must carry exactly the tag
    CHECK_THROWS_AS(
        ShieldedChannelParams(32, family, id, std::make_shared<BergerCode>(9)),
        std::invalid_argument);
    // payload shorter than the tag would gain nothing
    HashFamily wide(4, 8);
    Prng rng2(2);
    CHECK_THROWS_AS(
        ShieldedChannelParams(4, wide, select_hash(wide, rng2), code),
        std::invalid_argument);
}

TEST_CASE("frames round trip untouched") {
    ShieldedChannelParams params = make_params(24, 8, 33);
    Prng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        BitString payload = BitString::random(24, rng);
        OokFrame frame = shielded_send(payload, params);
        CHECK(frame.payload.size() == params.frame_length());
        VerificationVerdict verdict = shielded_receive(frame.payload, params);
        CHECK(verdict.accepted);
        CHECK(verdict.payload == payload);
    }
}

TEST_CASE("wrong frame length is rejected") {
    ShieldedChannelParams params = make_params(24, 8, 33);
    CHECK_FALSE(shielded_receive(BitString(10), params).accepted);
    CHECK_FALSE(shielded_receive(BitString(params.frame_length() + 1), params)
                    .accepted);
}

TEST_CASE("raising any zero in the tag region is always caught") {
    ShieldedChannelParams params = make_params(16, 8, 77);
    Prng rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        BitString payload = BitString::random(16, rng);
        OokFrame frame = shielded_send(payload, params);
        for (std::size_t i = 16; i < frame.payload.size(); ++i) {
            if (frame.payload[i]) continue;
            BitString tampered = frame.payload;
            tampered.set(i, 1);
            CHECK_FALSE(shielded_receive(tampered, params).accepted);
        }
    }
}

TEST_CASE("payload tampering is caught unless the hash collides") {
    ShieldedChannelParams params = make_params(32, 16, 99);
    Prng rng(7);
    int accepted = 0;
    const int trials = 300;
    for (int trial = 0; trial < trials; ++trial) {
        BitString payload = BitString::random(32, rng);
        OokFrame frame = shielded_send(payload, params);
        BitString tampered = frame.payload;
        bool changed = false;
        for (std::size_t i = 0; i < 32; ++i) {
            if (!tampered[i] && rng.bernoulli(0.5)) {
                tampered.set(i, 1);
                changed = true;
            }
        }
        if (!changed) continue;
        VerificationVerdict verdict = shielded_receive(tampered, params);
        if (verdict.accepted) ++accepted;
    }
    // expected acceptances: trials * 2^-16, i.e. essentially none
    CHECK(accepted == 0);
}

TEST_CASE("transcript checks accept equal histories and flag diverged ones") {
    HashFamily family(40, 8);
    Prng rng(13);
    HashId id = select_hash(family, rng);
    BergerCode code(8);

    TranscriptDigest a(family, id);
    TranscriptDigest b(family, id);
    a.absorb(BitString::from_string("110011"));
    b.absorb(BitString::from_string("110011"));
    a.absorb(BitString::from_string("01"));
    b.absorb(BitString::from_string("01"));

    BitString check = transcript_check_frame(b, code);
    CHECK(check.size() == code.codeword_length());
    CHECK(verify_transcript(a, check, code).accepted);
    CHECK(verify_transcript(a, check, code).payload == a.state());

    TranscriptDigest c(family, id);
    c.absorb(BitString::from_string("110011"));
    c.absorb(BitString::from_string("11"));
    CHECK_FALSE(verify_transcript(a, transcript_check_frame(c, code), code)
                    .accepted);
    CHECK_FALSE(verify_transcript(a, BitString(code.codeword_length()), code)
                    .accepted);
}

TEST_CASE("key confirmation binds role and key") {
    HashFamily confirm_family(24, 8);
    BergerCode code(8);
    Prng rng(19);
    BitString state = BitString::random(8, rng);
    HashId id = derive_confirmation_id(confirm_family, state);
    HashId id_again = derive_confirmation_id(confirm_family, state);
    CHECK(id == id_again);

    BitString key = BitString::random(16, rng);
    CHECK(key_confirm_payload(key, true) != key_confirm_payload(key, false));
    CHECK(key_confirm_payload(key, true).size() == 24);

    BitString tag_frame = key_confirm_frame(key, true, confirm_family, id, code);
    BitString tag_frame_again =
        key_confirm_frame(key, true, confirm_family, id, code);
    CHECK(tag_frame == tag_frame_again);
    CHECK(tag_frame != key_confirm_frame(key, false, confirm_family, id, code));

    BitString other_key = key;
    other_key.flip(3);
    CHECK(tag_frame !=
          key_confirm_frame(other_key, true, confirm_family, id, code));
}
