#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "lanwave/linecode.hpp"

using namespace lanwave::linecode;

TEST_CASE("manchester_encode fixed vectors")
{
    CHECK(manchester_encode({}, 0.05).chips.empty());

    const std::vector<std::uint8_t> bits{1, 0};
    const auto enc = manchester_encode(bits, 0.05);
    CHECK(enc.chips == std::vector<std::uint8_t>{1, 0, 0, 1});
    CHECK(enc.duration_s() == doctest::Approx(0.2));

    // 0xAA = 10101010 -> on,off,off,on repeated
    const std::vector<std::uint8_t> aa{1, 0, 1, 0, 1, 0, 1, 0};
    const auto preamble = manchester_encode(aa, 0.05);
    REQUIRE(preamble.chips.size() == 16);
    for (std::size_t i = 0; i < 16; i += 4) {
        CHECK(preamble.chips[i] == 1);
        CHECK(preamble.chips[i + 1] == 0);
        CHECK(preamble.chips[i + 2] == 0);
        CHECK(preamble.chips[i + 3] == 1);
    }
}

TEST_CASE("chip stream invariants hold for random input")
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> bit(0, 1);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::uint8_t> bits(1 + trial * 3);
        for (auto& b : bits) {
            b = static_cast<std::uint8_t>(bit(rng));
        }
        const auto enc = manchester_encode(bits, 0.01);
        REQUIRE(enc.chips.size() == bits.size() * 2);
        CHECK(enc.chips.size() % 2 == 0);
        for (std::size_t i = 0; i < enc.chips.size(); i += 2) {
            CHECK(enc.chips[i] != enc.chips[i + 1]);  // never (on,on) or (off,off)
        }
    }
}

TEST_CASE("manchester_decode_pair conventions and errors")
{
    CHECK(manchester_decode_pair(0.9, 0.1) == 1);
    CHECK(manchester_decode_pair(0.1, 0.9) == 0);

    DecodeStats stats;
    CHECK(manchester_decode_pair(0.5, 0.5, &stats) == 0);
    CHECK(stats.ties == 1);

    CHECK_THROWS_AS(manchester_decode_pair(std::numeric_limits<double>::quiet_NaN(), 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(manchester_decode_pair(0.1, std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
    CHECK_THROWS_AS(manchester_decode_pair(-0.1, 0.5), std::invalid_argument);
}

TEST_CASE("decode(encode(bits)) is the identity under noiseless amplitudes")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const auto frames = testutil::random_frames(rng, 1);
        const auto bits = frames[0].to_bits();
        const auto enc = manchester_encode(bits, 0.05);
        std::vector<double> amps;
        for (std::uint8_t chip : enc.chips) {
            amps.push_back(chip ? 1.0 : 0.0);
        }
        CHECK(manchester_decode(amps) == bits);
    }
}

TEST_CASE("decoding is invariant under positive scaling and common offset")
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> amp(0.0, 2.0);
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    std::uniform_real_distribution<double> offset(0.0, 10.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const double a = amp(rng);
        const double b = amp(rng);
        const double c = scale(rng);
        const double k = offset(rng);
        const int base = manchester_decode_pair(a, b);
        CHECK(manchester_decode_pair(c * a, c * b) == base);
        CHECK(manchester_decode_pair(a + k, b + k) == base);
    }
}
