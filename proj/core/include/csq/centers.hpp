#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "csq/hamming.hpp"

namespace csq {

enum class CenterMethod { kHadamard, kHadamard2k, kBalancedRandom, kBernoulli };

std::string_view to_string(CenterMethod method);

// Square matrix of +1/-1 entries, row-major.
class SignMatrix {
 public:
  SignMatrix(std::size_t n, std::vector<std::int8_t> entries);

  std::size_t size() const noexcept { return n_; }
  int operator()(std::size_t r, std::size_t c) const {
    return entries_[r * n_ + c];
  }

 private:
  std::size_t n_;
  std::vector<std::int8_t> entries_;
};

// Sylvester construction H_k = H_2 (x) H_{k/2}, H_1 = [1]. k must be a
// power of two.
SignMatrix hadamard_matrix(std::size_t k);

bool is_power_of_two(std::size_t k);

// An ordered, immutable set of m hash centers of k bits each.
class CenterSet {
 public:
  // Throws a dimension error if any center does not have exactly k bits, and
  // an invalid-dimension error if centers is empty.
  CenterSet(std::size_t k, std::vector<PackedCode> centers,
            CenterMethod method);

  std::size_t k() const noexcept { return k_; }
  std::size_t size() const noexcept { return centers_.size(); }
  CenterMethod method() const noexcept { return method_; }
  const PackedCode& operator[](std::size_t i) const { return centers_[i]; }
  std::span<const PackedCode> centers() const noexcept { return centers_; }

  friend bool operator==(const CenterSet&, const CenterSet&) = default;

 private:
  std::size_t k_;
  std::vector<PackedCode> centers_;
  CenterMethod method_;
};

// Hadamard rows when k is a power of two and m <= 2k, otherwise centers with
// exactly floor(k/2) ones at random positions. Requires m >= 1, k >= 2.
CenterSet generate_centers(std::size_t m, std::size_t k, std::uint64_t seed);

// Every bit drawn independently from Bern(0.5).
CenterSet generate_centers_bernoulli(std::size_t m, std::size_t k,
                                     std::uint64_t seed);

// Dispatches on an explicit method. kHadamard and kHadamard2k both mean
// "Hadamard if possible" and fall back like generate_centers.
CenterSet generate_centers(std::size_t m, std::size_t k, CenterMethod method,
                           std::uint64_t seed);

struct CenterValidity {
  double mean_distance = 0.0;
  std::size_t min_distance = 0;
  bool valid = false;
};

// Mean and minimum pairwise Hamming distance; valid iff mean >= k/2. A single
// center is vacuously valid with mean = min = k.
CenterValidity validate_centers(std::span<const PackedCode> centers);
CenterValidity validate_centers(const CenterSet& centers);

// Multi-hot category set over q categories with at least one member.
class LabelSet {
 public:
  LabelSet() = default;
  // Throws an invalid-label error when no bit is set.
  explicit LabelSet(PackedCode bits);

  static LabelSet single(std::size_t q, std::size_t category);
  static LabelSet of(std::size_t q, std::span<const std::size_t> categories);

  std::size_t q() const noexcept { return bits_.k(); }
  const PackedCode& bits() const noexcept { return bits_; }
  bool contains(std::size_t category) const { return bits_.bit(category); }
  std::size_t count() const noexcept { return bits_.popcount(); }
  std::vector<std::size_t> categories() const;
  bool intersects(const LabelSet& other) const;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;
  friend auto operator<=>(const LabelSet&, const LabelSet&) = default;

 private:
  PackedCode bits_;
};

// Per-sample semantic hash centers. Distinct label sets are materialized once
// in `targets`; `assignment[i]` indexes the target of sample i.
struct SemanticCenterMap {
  std::size_t k = 0;
  std::vector<PackedCode> targets;
  // Index into the originating CenterSet when the target is a single
  // category's center, -1 when it is a multi-label vote.
  std::vector<std::int64_t> source_center;
  std::vector<std::uint32_t> assignment;

  std::size_t sample_count() const noexcept { return assignment.size(); }
  const PackedCode& center_of(std::size_t sample) const {
    return targets[assignment[sample]];
  }
  // Center index for samples with a single-category target.
  std::optional<std::size_t> center_index_of(std::size_t sample) const;

  friend bool operator==(const SemanticCenterMap&,
                         const SemanticCenterMap&) = default;
};

// Category j maps to center j. Every label set must hold exactly one category.
SemanticCenterMap assign_single_label(const CenterSet& centers,
                                      std::span<const LabelSet> labels);

// Majority vote per bit over the member categories' centers; tied bits are
// drawn from Bern(0.5) on the "ties" sub-stream of `seed`. Identical label sets
// share one target.
SemanticCenterMap assign_multi_label(const CenterSet& centers,
                                     std::span<const LabelSet> labels,
                                     std::uint64_t seed);

}  // namespace csq
