#include "csq/centers.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "csq/error.hpp"
#include "csq/rng.hpp"

namespace csq {
namespace {

constexpr int kMaxDuplicateRetries = 100;

void check_generation_args(std::size_t m, std::size_t k) {
  if (m < 1) throw Error(ErrorKind::kInvalidDimension, "need at least one center");
  if (k < 2) {
    throw Error(ErrorKind::kInvalidDimension,
                "code length must be at least 2, got " + std::to_string(k));
  }
}

PackedCode hadamard_row(const SignMatrix& h, std::size_t row, bool negate) {
  PackedCode code(h.size());
  for (std::size_t c = 0; c < h.size(); ++c) {
    const int v = negate ? -h(row, c) : h(row, c);
    code.set(c, v > 0);
  }
  return code;
}

CenterSet hadamard_centers(std::size_t m, std::size_t k) {
  const SignMatrix h = hadamard_matrix(k);
  std::vector<PackedCode> centers;
  centers.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    centers.push_back(hadamard_row(h, i % k, i >= k));
  }
  return CenterSet(k, std::move(centers),
                   m <= k ? CenterMethod::kHadamard : CenterMethod::kHadamard2k);
}

// Draws m distinct centers from `draw`, redrawing a duplicate up to
// kMaxDuplicateRetries times.
template <typename Draw>
std::vector<PackedCode> distinct_centers(std::size_t m, Draw&& draw) {
  std::vector<PackedCode> centers;
  centers.reserve(m);
  std::set<PackedCode> seen;
  for (std::size_t i = 0; i < m; ++i) {
    PackedCode c = draw();
    int retries = 0;
    while (seen.contains(c)) {
      if (++retries > kMaxDuplicateRetries) {
        throw Error(ErrorKind::kGeneration,
                    "could not draw a distinct center " + std::to_string(i) +
                        " after " + std::to_string(kMaxDuplicateRetries) +
                        " retries");
      }
      c = draw();
    }
    seen.insert(c);
    centers.push_back(std::move(c));
  }
  return centers;
}

CenterSet balanced_random_centers(std::size_t m, std::size_t k,
                                  std::uint64_t seed) {
  Rng rng(derive_seed(seed, "centers"));
  std::vector<std::size_t> positions(k);
  auto draw = [&] {
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    PackedCode c(k);
    // Partial Fisher-Yates: the first k/2 slots become a uniform subset.
    for (std::size_t i = 0; i < k / 2; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(k - i));
      std::swap(positions[i], positions[j]);
      c.set(positions[i], true);
    }
    return c;
  };
  return CenterSet(k, distinct_centers(m, draw), CenterMethod::kBalancedRandom);
}

}  // namespace

std::string_view to_string(CenterMethod method) {
  switch (method) {
    case CenterMethod::kHadamard: return "hadamard";
    case CenterMethod::kHadamard2k: return "hadamard2k";
    case CenterMethod::kBalancedRandom: return "balanced";
    case CenterMethod::kBernoulli: return "bernoulli";
  }
  return "unknown";
}

SignMatrix::SignMatrix(std::size_t n, std::vector<std::int8_t> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n_ * n_) {
    throw Error(ErrorKind::kDimension, "sign matrix entry count is not n*n");
  }
}

bool is_power_of_two(std::size_t k) { return k != 0 && (k & (k - 1)) == 0; }

SignMatrix hadamard_matrix(std::size_t k) {
  if (!is_power_of_two(k)) {
    throw Error(ErrorKind::kInvalidDimension,
                "Hadamard order must be a power of two, got " +
                    std::to_string(k));
  }
  std::vector<std::int8_t> h{1};
  for (std::size_t n = 1; n < k; n *= 2) {
    // [[H, H], [H, -H]]
    std::vector<std::int8_t> next(4 * n * n);
    const std::size_t width = 2 * n;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        const std::int8_t v = h[r * n + c];
        next[r * width + c] = v;
        next[r * width + c + n] = v;
        next[(r + n) * width + c] = v;
        next[(r + n) * width + c + n] = static_cast<std::int8_t>(-v);
      }
    }
    h = std::move(next);
  }
  return SignMatrix(k, std::move(h));
}

CenterSet::CenterSet(std::size_t k, std::vector<PackedCode> centers,
                     CenterMethod method)
    : k_(k), centers_(std::move(centers)), method_(method) {
  if (centers_.empty()) {
    throw Error(ErrorKind::kInvalidDimension, "center set is empty");
  }
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    if (centers_[i].k() != k_) {
      throw Error(ErrorKind::kDimension,
                  "center " + std::to_string(i) + " has " +
                      std::to_string(centers_[i].k()) + " bits, expected " +
                      std::to_string(k_));
    }
  }
}

CenterSet generate_centers(std::size_t m, std::size_t k, std::uint64_t seed) {
  check_generation_args(m, k);
  if (is_power_of_two(k) && m <= 2 * k) return hadamard_centers(m, k);
  return balanced_random_centers(m, k, seed);
}

CenterSet generate_centers_bernoulli(std::size_t m, std::size_t k,
                                     std::uint64_t seed) {
  check_generation_args(m, k);
  Rng rng(derive_seed(seed, "centers"));
  auto draw = [&] {
    PackedCode c(k);
    for (std::size_t i = 0; i < k; ++i) c.set(i, rng.fair_bit());
    return c;
  };
  return CenterSet(k, distinct_centers(m, draw), CenterMethod::kBernoulli);
}

CenterSet generate_centers(std::size_t m, std::size_t k, CenterMethod method,
                           std::uint64_t seed) {
  switch (method) {
    case CenterMethod::kHadamard:
    case CenterMethod::kHadamard2k:
      return generate_centers(m, k, seed);
    case CenterMethod::kBalancedRandom:
      check_generation_args(m, k);
      return balanced_random_centers(m, k, seed);
    case CenterMethod::kBernoulli:
      return generate_centers_bernoulli(m, k, seed);
  }
  throw Error(ErrorKind::kConfig, "unknown center method");
}

CenterValidity validate_centers(std::span<const PackedCode> centers) {
  if (centers.empty()) {
    throw Error(ErrorKind::kInvalidDimension, "no centers to validate");
  }
  const std::size_t k = centers.front().k();
  for (const auto& c : centers) {
    if (c.k() != k) {
      throw Error(ErrorKind::kDimension, "centers have inconsistent bit lengths");
    }
  }
  const std::size_t m = centers.size();
  if (m == 1) {
    return {static_cast<double>(k), k, true};
  }
  std::uint64_t total = 0;
  std::size_t min_distance = k;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const std::size_t d = hamming_distance(centers[i], centers[j]);
      total += d;
      min_distance = std::min(min_distance, d);
    }
  }
  const double pairs = static_cast<double>(m) * static_cast<double>(m - 1) / 2.0;
  CenterValidity v;
  v.mean_distance = static_cast<double>(total) / pairs;
  v.min_distance = min_distance;
  // mean >= k/2  <=>  2 * total >= k * pairs, compared in integers.
  v.valid = 2 * total >= static_cast<std::uint64_t>(k) * (m * (m - 1) / 2);
  return v;
}

CenterValidity validate_centers(const CenterSet& centers) {
  return validate_centers(centers.centers());
}

LabelSet::LabelSet(PackedCode bits) : bits_(std::move(bits)) {
  if (bits_.popcount() == 0) {
    throw Error(ErrorKind::kInvalidLabel, "label set has no categories");
  }
}

LabelSet LabelSet::single(std::size_t q, std::size_t category) {
  const std::size_t c[] = {category};
  return of(q, c);
}

LabelSet LabelSet::of(std::size_t q, std::span<const std::size_t> categories) {
  PackedCode bits(q);
  for (std::size_t c : categories) {
    if (c >= q) {
      throw Error(ErrorKind::kInvalidLabel,
                  "category " + std::to_string(c) + " outside [0, " +
                      std::to_string(q) + ")");
    }
    bits.set(c, true);
  }
  return LabelSet(std::move(bits));
}

std::vector<std::size_t> LabelSet::categories() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits_.k(); ++i) {
    if (bits_.bit(i)) out.push_back(i);
  }
  return out;
}

bool LabelSet::intersects(const LabelSet& other) const {
  if (q() != other.q()) {
    throw Error(ErrorKind::kDimension, "label sets over different category counts");
  }
  const auto a = bits_.words();
  const auto b = other.bits_.words();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] & b[i]) != 0) return true;
  }
  return false;
}

std::optional<std::size_t> SemanticCenterMap::center_index_of(
    std::size_t sample) const {
  const std::int64_t src = source_center[assignment[sample]];
  if (src < 0) return std::nullopt;
  return static_cast<std::size_t>(src);
}

namespace {

void check_labels(const CenterSet& centers, std::span<const LabelSet> labels) {
  if (labels.empty()) return;
  const std::size_t q = labels.front().q();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].count() == 0) {
      throw Error(ErrorKind::kInvalidLabel,
                  "sample " + std::to_string(i) + " has an empty label set");
    }
    if (labels[i].q() != q) {
      throw Error(ErrorKind::kDimension,
                  "sample " + std::to_string(i) + " has " +
                      std::to_string(labels[i].q()) + " categories, expected " +
                      std::to_string(q));
    }
  }
  if (q > centers.size()) {
    throw Error(ErrorKind::kInsufficientCenters,
                std::to_string(q) + " categories but only " +
                    std::to_string(centers.size()) + " centers");
  }
}

}  // namespace

SemanticCenterMap assign_single_label(const CenterSet& centers,
                                      std::span<const LabelSet> labels) {
  check_labels(centers, labels);
  SemanticCenterMap map;
  map.k = centers.k();
  map.assignment.reserve(labels.size());
  std::map<std::size_t, std::uint32_t> target_of_category;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].count() != 1) {
      throw Error(ErrorKind::kInvalidLabel,
                  "sample " + std::to_string(i) + " has " +
                      std::to_string(labels[i].count()) +
                      " categories in single-label assignment");
    }
    const std::size_t category = labels[i].categories().front();
    auto [it, inserted] = target_of_category.try_emplace(
        category, static_cast<std::uint32_t>(map.targets.size()));
    if (inserted) {
      map.targets.push_back(centers[category]);
      map.source_center.push_back(static_cast<std::int64_t>(category));
    }
    map.assignment.push_back(it->second);
  }
  return map;
}

SemanticCenterMap assign_multi_label(const CenterSet& centers,
                                     std::span<const LabelSet> labels,
                                     std::uint64_t seed) {
  check_labels(centers, labels);
  Rng ties(derive_seed(seed, "ties"));
  SemanticCenterMap map;
  map.k = centers.k();
  map.assignment.reserve(labels.size());
  std::map<LabelSet, std::uint32_t> cache;
  const std::size_t k = centers.k();
  std::vector<std::size_t> ones(k);
  for (const LabelSet& label : labels) {
    auto [it, inserted] = cache.try_emplace(
        label, static_cast<std::uint32_t>(map.targets.size()));
    if (inserted) {
      const std::vector<std::size_t> members = label.categories();
      if (members.size() == 1) {
        map.targets.push_back(centers[members.front()]);
        map.source_center.push_back(static_cast<std::int64_t>(members.front()));
      } else {
        std::fill(ones.begin(), ones.end(), 0);
        for (std::size_t c : members) {
          for (std::size_t b = 0; b < k; ++b) ones[b] += centers[c].bit(b);
        }
        PackedCode vote(k);
        for (std::size_t b = 0; b < k; ++b) {
          const std::size_t twice = 2 * ones[b];
          if (twice > members.size()) {
            vote.set(b, true);
          } else if (twice == members.size()) {
            vote.set(b, ties.fair_bit());
          }
        }
        map.targets.push_back(std::move(vote));
        map.source_center.push_back(-1);
      }
    }
    map.assignment.push_back(it->second);
  }
  return map;
}

}  // namespace csq
