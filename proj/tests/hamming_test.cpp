#include <gtest/gtest.h>

#include <random>

#include "csq/error.hpp"
#include "csq/hamming.hpp"
#include "csq/rng.hpp"
#include "oracles.hpp"

namespace csq {
namespace {

PackedCode from_string(const std::string& bits) {
  std::vector<std::uint8_t> v;
  for (char c : bits) v.push_back(c == '1');
  return pack(v);
}

PackedCode random_code(std::size_t k, Rng& rng) {
  PackedCode c(k);
  for (std::size_t i = 0; i < k; ++i) c.set(i, rng.fair_bit());
  return c;
}

TEST(Hamming, Distance) {
  EXPECT_EQ(hamming_distance(from_string("1010"), from_string("0110")), 2u);
  const PackedCode a = from_string("1101001");
  EXPECT_EQ(hamming_distance(a, a), 0u);

  Rng rng(7);
  const PackedCode x = random_code(64, rng);
  EXPECT_EQ(hamming_distance(x, complement(x)), 64u);
}

TEST(Hamming, MismatchedLengthThrows) {
  try {
    hamming_distance(PackedCode(4), PackedCode(5));
    FAIL() << "expected a dimension error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDimension);
  }
}

TEST(Hamming, Binarize) {
  EXPECT_EQ(binarize(std::vector<double>{0.9, 0.1}), from_string("10"));
  EXPECT_EQ(binarize(std::vector<double>{0.5}), from_string("1"));
  EXPECT_EQ(binarize(std::vector<double>{0.49999, 0.50001}), from_string("01"));
  try {
    binarize(std::vector<double>{0.2, std::nan("")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNumeric);
  }
}

TEST(Hamming, PackUnpack) {
  Rng rng(11);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 1 + rng.below(200);
    std::vector<std::uint8_t> bits(k);
    for (auto& b : bits) b = rng.fair_bit();
    EXPECT_EQ(unpack(pack(bits)), bits);
  }
  EXPECT_EQ(unpack(PackedCode(17)), std::vector<std::uint8_t>(17, 0));
  EXPECT_EQ(PackedCode(65).words().size(), 2u);
}

TEST(Hamming, PaddingStaysZero) {
  PackedCode c = complement(PackedCode(70));
  EXPECT_EQ(c.popcount(), 70u);
  EXPECT_EQ(c.words()[1] >> 6, 0u);
  auto bytes = c.to_bytes();
  ASSERT_EQ(bytes.size(), 9u);
  EXPECT_EQ(bytes.back(), 0x3f);
  EXPECT_EQ(PackedCode::from_bytes(bytes, 70), c);
  bytes.back() = 0x7f;
  EXPECT_THROW(PackedCode::from_bytes(bytes, 70), Error);
}

TEST(Hamming, ByteOrderIsLsbFirst) {
  const PackedCode c = from_string("1000000001");  // bits 0 and 9
  const auto bytes = c.to_bytes();
  ASSERT_EQ(bytes.size(), 2u);
  EXPECT_EQ(bytes[0], 0x01);
  EXPECT_EQ(bytes[1], 0x02);
}

TEST(HammingProperty, MetricAxioms) {
  Rng rng(3);
  for (int t = 0; t < 500; ++t) {
    const std::size_t k = 1 + rng.below(150);
    const PackedCode a = random_code(k, rng);
    const PackedCode b = random_code(k, rng);
    const PackedCode c = random_code(k, rng);
    const auto ab = hamming_distance(a, b);
    EXPECT_EQ(ab, hamming_distance(b, a));
    EXPECT_EQ(ab == 0, a == b);
    EXPECT_LE(hamming_distance(a, c), ab + hamming_distance(b, c));
    EXPECT_EQ(ab, oracle::bit_distance(a, b));
  }
}

TEST(HammingProperty, DistanceFromSignedInnerProduct) {
  Rng rng(5);
  for (int t = 0; t < 500; ++t) {
    const std::size_t k = 1 + rng.below(130);
    const PackedCode a = random_code(k, rng);
    const PackedCode b = random_code(k, rng);
    long dot = 0;
    for (std::size_t i = 0; i < k; ++i) {
      dot += (a.bit(i) ? 1 : -1) * (b.bit(i) ? 1 : -1);
    }
    EXPECT_EQ(static_cast<long>(hamming_distance(a, b)),
              (static_cast<long>(k) - dot) / 2);
  }
}

TEST(Rng, DerivedStreamsDiffer) {
  EXPECT_NE(derive_seed(1, "centers"), derive_seed(1, "ties"));
  EXPECT_NE(derive_seed(1, "centers"), derive_seed(2, "centers"));
  EXPECT_EQ(derive_seed(9, "init"), derive_seed(9, "init"));
}

TEST(Rng, BelowIsInRange) {
  Rng rng(1);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) ++hist[rng.below(7)];
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

}  // namespace
}  // namespace csq
