#include "doctest.h"

#include <sstream>
#include <vector>

#include "oracle.hpp"
#include "slap/bitstring.hpp"
#include "slap/rng.hpp"

using slap::BitString;

namespace {
BitString bs(const char* s) { return BitString::parse(s); }
}  // namespace

TEST_CASE("parse and render") {
    CHECK(bs("0110").to_string() == "0110");
    CHECK(bs("1").size() == 1);
    CHECK_THROWS_AS(bs("01a0"), slap::ParseError);
    CHECK(bs("").empty());
    std::ostringstream os;
    os << bs("1001");
    CHECK(os.str() == "1001");
    const BitString lead = BitString::leading_ones(8, 3);
    CHECK(lead.to_string() == "11100000");
}

TEST_CASE("index 0 is the leftmost character") {
    const BitString s = bs("1000000000000000000000000000000000000000000000000000000000000000001");
    CHECK(s.bit(0));
    CHECK_FALSE(s.bit(1));
    CHECK(s.bit(s.size() - 1));
}

TEST_CASE("weight") {
    CHECK(weight(bs("11101001010111100101011010011011")) == 19);
    CHECK(weight(bs("00000000")) == 0);
    CHECK(weight(bs("1011")) == 3);
}

TEST_CASE("xor") {
    const BitString a = bs("11100101110100110101100101101101");
    const BitString b = bs("11011010010101000101011101010001");
    CHECK((a ^ b).to_string() == "00111111100001110000111000111100");
    CHECK(weight(a ^ a) == 0);
    CHECK((a ^ BitString(a.size())) == a);
    CHECK_THROWS_AS((void)(a ^ bs("1")), std::invalid_argument);
}

TEST_CASE("rotl and rotr") {
    CHECK(rotl(bs("0110"), 2).to_string() == "1001");
    CHECK(rotl(bs("10111"), 4).to_string() == "11011");
    CHECK(rotl(bs("10111"), 0) == bs("10111"));
    CHECK(rotl(bs("10111"), 5) == bs("10111"));
    CHECK(rotr(bs("11100"), 3).to_string() == "10011");
    CHECK(rotr(rotl(bs("10111"), 4), 4) == bs("10111"));
    CHECK(rotr(bs("10111"), 0) == bs("10111"));
    CHECK_THROWS_AS((void)rotl(bs("101"), 4), std::out_of_range);
    CHECK_THROWS_AS((void)rotr(bs("101"), 4), std::out_of_range);
}

TEST_CASE("flip_bits") {
    CHECK(flip_bits(bs("0000"), {0, 3}).to_string() == "1001");
    CHECK(flip_bits(bs("10000000"), {0}).to_string() == "00000000");
    const BitString s = bs("1101001110");
    CHECK(flip_bits(flip_bits(s, {1, 4, 9}), {1, 4, 9}) == s);
    CHECK_THROWS_AS((void)flip_bits(s, {10}), std::out_of_range);
}

TEST_CASE("halves") {
    auto [l, r] = slap::halves(bs("10110100"));
    CHECK(l.to_string() == "1011");
    CHECK(r.to_string() == "0100");
    auto [l2, r2] = slap::halves(bs("10"));
    CHECK(l2.to_string() == "1");
    CHECK(r2.to_string() == "0");
    CHECK_THROWS_AS((void)slap::halves(bs("101")), std::invalid_argument);
}

TEST_CASE("random_bitstring") {
    slap::Rng a(42), b(42);
    CHECK(random_bitstring(32, a) == random_bitstring(32, b));
    CHECK(random_bitstring(32, a).size() == 32);
    CHECK_THROWS_AS((void)random_bitstring(0, a), std::invalid_argument);

    slap::Rng r(7);
    double total = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) total += weight(random_bitstring(32, r));
    const double mean = total / draws;
    CHECK(mean >= 15.8);
    CHECK(mean <= 16.2);
}

TEST_CASE("substreams are independent of call order") {
    slap::Rng x = slap::Rng::substream(9, 3);
    slap::Rng y = slap::Rng::substream(9, 3);
    slap::Rng z = slap::Rng::substream(9, 4);
    const auto vx = x.next();
    CHECK(vx == y.next());
    CHECK(vx != z.next());
    slap::Rng u(1);
    for (int i = 0; i < 1000; ++i) CHECK(u.below(7) < 7);
}

TEST_CASE("agrees with the character-string oracle") {
    slap::Rng rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t len = 1 + rng.below(150);
        const BitString a = random_bitstring(len, rng);
        const BitString b = random_bitstring(len, rng);
        const std::string sa = a.to_string(), sb = b.to_string();
        const std::size_t k = rng.below(len + 1);
        REQUIRE(weight(a) == oracle::wt(sa));
        REQUIRE((a ^ b).to_string() == oracle::xor_(sa, sb));
        REQUIRE(rotl(a, k).to_string() == oracle::rotl(sa, k));
        REQUIRE(rotr(a, k).to_string() == oracle::rotr(sa, k));
        const std::size_t pos = rng.below(len);
        const std::size_t n = 1 + rng.below(std::min<std::size_t>(64, len - pos));
        REQUIRE(a.slice(pos, n).to_string() == sa.substr(pos, n));
        REQUIRE(a.weight(pos, n) == oracle::wt(sa.substr(pos, n)));
        REQUIRE(BitString::parse(sa) == a);
    }
}

TEST_CASE("properties") {
    slap::Rng rng(5);
    for (int trial = 0; trial < 1000; ++trial) {
        const BitString a = random_bitstring(96, rng);
        const BitString b = random_bitstring(96, rng);
        CHECK(weight(a ^ b) % 2 == (weight(a) + weight(b)) % 2);
        const std::size_t k = rng.below(97);
        CHECK(weight(rotl(a, k)) == weight(a));
        CHECK(rotl(a, a.size()) == a);
        std::vector<std::size_t> pos;
        for (std::size_t i = 0; i < 1 + rng.below(5); ++i) {
            const std::size_t p = rng.below(96);
            if (std::find(pos.begin(), pos.end(), p) == pos.end()) pos.push_back(p);
        }
        CHECK((weight(flip_bits(a, pos)) + weight(a)) % 2 == pos.size() % 2);
        auto [l, r] = slap::halves(a);
        const std::vector<BitString> parts{l, r};
        CHECK(slap::concat(parts) == a);
    }
}
