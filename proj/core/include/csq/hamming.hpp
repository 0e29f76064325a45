#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace csq {

// K-bit binary code packed LSB-first into 64-bit words: bit i lives in word
// i / 64 at position i % 64. Bits at positions >= k are always zero.
class PackedCode {
 public:
  PackedCode() = default;
  // All-zero code of length k.
  explicit PackedCode(std::size_t k);

  std::size_t k() const noexcept { return k_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool bit(std::size_t i) const {
    return ((words_[i / 64] >> (i % 64)) & 1u) != 0;
  }
  void set(std::size_t i, bool value);

  std::size_t popcount() const noexcept;

  // ceil(k / 8) bytes, LSB-first within each byte.
  std::vector<std::uint8_t> to_bytes() const;
  // Inverse of to_bytes. Throws a dimension error when the byte count does not
  // match k or when padding bits are set.
  static PackedCode from_bytes(std::span<const std::uint8_t> bytes,
                               std::size_t k);

  friend bool operator==(const PackedCode&, const PackedCode&) = default;
  friend auto operator<=>(const PackedCode& a, const PackedCode& b) {
    if (a.k_ != b.k_) return a.k_ <=> b.k_;
    return a.words_ <=> b.words_;
  }

 private:
  std::size_t k_ = 0;
  std::vector<std::uint64_t> words_;
};

inline std::size_t word_count(std::size_t k) { return (k + 63) / 64; }
inline std::size_t byte_count(std::size_t k) { return (k + 7) / 8; }

// Number of differing bit positions. Throws a dimension error if a.k() != b.k().
std::size_t hamming_distance(const PackedCode& a, const PackedCode& b);

// bit_i = 1 iff h_i >= 0.5. NaN entries raise a numeric error.
PackedCode binarize(std::span<const double> h);

// Packs a {0,1} vector; any nonzero byte counts as 1.
PackedCode pack(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> unpack(const PackedCode& code);

PackedCode complement(const PackedCode& code);

}  // namespace csq
