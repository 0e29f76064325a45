#include "csq/hamming.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "csq/error.hpp"

namespace csq {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidDimension: return "invalid dimension";
    case ErrorKind::kDimension: return "dimension mismatch";
    case ErrorKind::kInsufficientCenters: return "insufficient centers";
    case ErrorKind::kInvalidLabel: return "invalid label";
    case ErrorKind::kNumeric: return "numeric error";
    case ErrorKind::kGeneration: return "generation error";
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kIo: return "io error";
    case ErrorKind::kTraining: return "training error";
    case ErrorKind::kConfig: return "config error";
  }
  return "error";
}

PackedCode::PackedCode(std::size_t k) : k_(k), words_(word_count(k), 0) {}

void PackedCode::set(std::size_t i, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (i % 64);
  if (value) {
    words_[i / 64] |= mask;
  } else {
    words_[i / 64] &= ~mask;
  }
}

std::size_t PackedCode::popcount() const noexcept {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

std::vector<std::uint8_t> PackedCode::to_bytes() const {
  std::vector<std::uint8_t> bytes(byte_count(k_));
  for (std::size_t b = 0; b < bytes.size(); ++b) {
    bytes[b] = static_cast<std::uint8_t>(words_[b / 8] >> (8 * (b % 8)));
  }
  return bytes;
}

PackedCode PackedCode::from_bytes(std::span<const std::uint8_t> bytes,
                                  std::size_t k) {
  if (bytes.size() != byte_count(k)) {
    throw Error(ErrorKind::kDimension,
                "expected " + std::to_string(byte_count(k)) + " bytes for " +
                    std::to_string(k) + " bits, got " +
                    std::to_string(bytes.size()));
  }
  PackedCode code(k);
  for (std::size_t b = 0; b < bytes.size(); ++b) {
    code.words_[b / 8] |= std::uint64_t{bytes[b]} << (8 * (b % 8));
  }
  if (k % 64 != 0 && !code.words_.empty() &&
      (code.words_.back() >> (k % 64)) != 0) {
    throw Error(ErrorKind::kDimension, "padding bits beyond k are set");
  }
  return code;
}

std::size_t hamming_distance(const PackedCode& a, const PackedCode& b) {
  if (a.k() != b.k()) {
    throw Error(ErrorKind::kDimension,
                "hamming distance between " + std::to_string(a.k()) +
                    "-bit and " + std::to_string(b.k()) + "-bit codes");
  }
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t d = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) d += std::popcount(wa[i] ^ wb[i]);
  return d;
}

PackedCode binarize(std::span<const double> h) {
  PackedCode code(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (std::isnan(h[i])) {
      throw Error(ErrorKind::kNumeric,
                  "NaN in relaxed code at position " + std::to_string(i));
    }
    if (h[i] >= 0.5) code.set(i, true);
  }
  return code;
}

PackedCode pack(std::span<const std::uint8_t> bits) {
  PackedCode code(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0) code.set(i, true);
  }
  return code;
}

std::vector<std::uint8_t> unpack(const PackedCode& code) {
  std::vector<std::uint8_t> bits(code.k());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = code.bit(i) ? 1 : 0;
  return bits;
}

PackedCode complement(const PackedCode& code) {
  PackedCode out(code.k());
  for (std::size_t i = 0; i < code.k(); ++i) out.set(i, !code.bit(i));
  return out;
}

}  // namespace csq
