#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ska/bitstring.hpp"
#include "ska/channel.hpp"
#include "ska/rng.hpp"

using namespace ska;

TEST_CASE("bsc parameters are validated") {
    CHECK_THROWS_AS(BscParams(-0.01, 1), std::invalid_argument);
    CHECK_THROWS_AS(BscParams(0.5, 1), std::invalid_argument);
    CHECK_NOTHROW(BscParams(0.0, 1));
    CHECK_NOTHROW(BscParams(0.499, 1));
}

TEST_CASE("noiseless channel is the identity") {
    Prng rng(4);
    BitString msg = BitString::random(512, rng);
    CHECK(transmit_bsc(msg, BscParams(0.0, 77)) == msg);
}

TEST_CASE("bsc is deterministic under a fixed seed") {
    Prng rng(5);
    BitString msg = BitString::random(256, rng);
    BitString a = transmit_bsc(msg, BscParams(0.2, 11));
    BitString b = transmit_bsc(msg, BscParams(0.2, 11));
    BitString c = transmit_bsc(msg, BscParams(0.2, 12));
    CHECK(a == b);
    CHECK(a != c);
    CHECK(a.size() == msg.size());
}

TEST_CASE("empirical flip rate tracks p") {
    const std::size_t n = 100000;
    const double p = 0.1;
    BitString msg(n);
    BitString out = transmit_bsc(msg, BscParams(p, 2024));
    double rate = static_cast<double>(out.weight()) / static_cast<double>(n);
    double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
    CHECK(std::abs(rate - p) < 5 * sigma);
}

TEST_CASE("stateful channel keeps drawing fresh noise") {
    BscChannel channel(BscParams(0.5 - 1e-9, 21));
    BitString msg(64);
    BitString first = channel.transmit(msg);
    BitString second = channel.transmit(msg);
    CHECK(first != second);
}

TEST_CASE("ook transmission can only raise bits") {
    OokFrame frame{BitString::from_string("0101")};
    CHECK(transmit_ook(frame, BitString::from_string("0000")) ==
          frame.payload);
    CHECK(transmit_ook(frame, BitString::from_string("1010")).to_string() ==
          "1111");
    CHECK(transmit_ook(frame, BitString::from_string("0100")).to_string() ==
          "0101");
    CHECK_THROWS_AS(transmit_ook(frame, BitString(3)), std::invalid_argument);

    Prng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        OokFrame f{BitString::random(40, rng)};
        BitString mask = BitString::random(40, rng);
        CHECK(f.payload.support_subset_of(transmit_ook(f, mask)));
    }
}

TEST_CASE("composed error rate of chained symmetric channels") {
    CHECK(compose_error_rates(0.1, 0.05) == doctest::Approx(0.14));
    CHECK(compose_error_rates(0.3, 0.0) == doctest::Approx(0.3));
    CHECK(compose_error_rates(0.0, 0.2) == doctest::Approx(0.2));
    CHECK(compose_error_rates(0.2, 0.3) ==
          doctest::Approx(compose_error_rates(0.3, 0.2)));
}
