#include "smplab/bitstring.hpp"
#include "smplab/error.hpp"
#include "smplab/rational.hpp"
#include "smplab/rng.hpp"

#include <gtest/gtest.h>

#include <set>
#include <unordered_set>

namespace smplab {
namespace {

TEST(BitString, FromUintIsMsbFirst) {
  const auto b = BitString::from_uint(0b1011, 4);
  EXPECT_EQ(b.to_string(), "1011");
  EXPECT_TRUE(b.get(0));
  EXPECT_FALSE(b.get(1));
  EXPECT_EQ(b.to_uint(), 11u);
}

TEST(BitString, FromBitsRejectsJunk) {
  EXPECT_EQ(BitString::from_bits("0110").to_uint(), 6u);
  EXPECT_THROW(BitString::from_bits("01a"), ConfigError);
}

TEST(BitString, HexRoundTripAndPadding) {
  const auto b = BitString::from_bits("101");
  EXPECT_EQ(b.to_hex(), "a0");
  EXPECT_EQ(BitString::from_hex("a0", 3), b);
  // Pad bits must be zero.
  EXPECT_THROW(BitString::from_hex("a1", 3), ConfigError);
  // Too few bytes for the size.
  EXPECT_THROW(BitString::from_hex("ff", 9), ConfigError);
  EXPECT_EQ(BitString::zeros(0).to_hex(), "");
}

TEST(BitString, HexRoundTripRandomLengths) {
  Rng rng(11);
  for (std::size_t len = 1; len < 200; len += 7) {
    const auto b = rng.bits(len);
    EXPECT_EQ(b.to_hex().size(), 2 * ((len + 7) / 8));
    EXPECT_EQ(BitString::from_hex(b.to_hex(), len), b);
  }
}

TEST(BitString, XorDotAndParity) {
  const auto a = BitString::from_bits("1100");
  const auto b = BitString::from_bits("1010");
  EXPECT_EQ((a ^ b).to_string(), "0110");
  EXPECT_TRUE(a.dot(b));  // one common 1
  EXPECT_FALSE(a.dot(BitString::from_bits("1100")));
  EXPECT_TRUE(BitString::from_bits("11").dot(BitString::from_bits("01")));
  EXPECT_TRUE(BitString::from_bits("111").parity());
  EXPECT_EQ(BitString::ones(70).popcount(), 70u);
  EXPECT_THROW(a ^ BitString::zeros(3), ConfigError);
  EXPECT_THROW((void)a.dot(BitString::zeros(5)), ConfigError);
}

TEST(BitString, DotMatchesBitwiseOracleAcrossWords) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t len = 1 + rng.uniform(150);
    const auto a = rng.bits(len);
    const auto b = rng.bits(len);
    bool expect = false;
    for (std::size_t i = 0; i < len; ++i) expect ^= a.get(i) && b.get(i);
    EXPECT_EQ(a.dot(b), expect);
  }
}

TEST(BitString, SliceAppendConcat) {
  const auto b = BitString::from_bits("110010");
  EXPECT_EQ(b.slice(1, 3).to_string(), "100");
  EXPECT_THROW((void)b.slice(4, 3), ConfigError);
  auto c = BitString::from_bits("1");
  c.append(BitString::from_bits("01"));
  c.push_back(true);
  EXPECT_EQ(c.to_string(), "1011");
  EXPECT_EQ(concat(BitString::from_bits("1"), BitString::from_bits("0")).to_string(), "10");
  Rng rng(3);
  const auto big = rng.bits(130);
  EXPECT_EQ(concat(big.slice(0, 61), big.slice(61, 69)), big);
}

TEST(BitString, OrderingAndHash) {
  std::set<BitString> ordered{BitString::from_bits("10"), BitString::from_bits("01")};
  EXPECT_EQ(ordered.begin()->to_string(), "01");
  std::unordered_set<BitString> hashed;
  for (std::uint64_t v = 0; v < 16; ++v) hashed.insert(BitString::from_uint(v, 4));
  EXPECT_EQ(hashed.size(), 16u);
  EXPECT_NE(BitString::zeros(3), BitString::zeros(4));
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Rng, UniformStaysInRange) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(rng.uniform(7), 7u);
}

TEST(Rational, FormatAndParse) {
  EXPECT_EQ(to_string(Rational(6, 8)), "3/4");
  EXPECT_EQ(to_string(Rational(4, 2)), "2");
  EXPECT_EQ(parse_rational("-3/9"), Rational(-1, 3));
  EXPECT_EQ(parse_rational("5"), Rational(5));
  EXPECT_THROW(parse_rational("1/0"), ConfigError);
  EXPECT_THROW(parse_rational("x"), ConfigError);
  EXPECT_EQ(pow(Rational(1, 2), 3), Rational(1, 8));
  EXPECT_EQ(pow(Rational(3), 0), Rational(1));
  EXPECT_DOUBLE_EQ(to_double(Rational(1, 4)), 0.25);
}

}  // namespace
}  // namespace smplab
