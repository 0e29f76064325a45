#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "csq/centers.hpp"
#include "csq/hamming.hpp"

namespace csq {

// Linear-scan Hamming index over database codes with their label sets.
class CodeIndex {
 public:
  CodeIndex(std::vector<PackedCode> codes, std::vector<LabelSet> labels);

  std::size_t k() const noexcept { return k_; }
  std::size_t size() const noexcept { return codes_.size(); }
  std::span<const PackedCode> codes() const noexcept { return codes_; }
  std::span<const LabelSet> labels() const noexcept { return labels_; }

 private:
  std::size_t k_ = 0;
  std::vector<PackedCode> codes_;
  std::vector<LabelSet> labels_;
};

struct QuerySet {
  std::vector<PackedCode> codes;
  std::vector<LabelSet> labels;

  std::size_t size() const noexcept { return codes.size(); }
};

// Database indices by ascending Hamming distance, ties by ascending index.
std::vector<std::uint32_t> rank_by_distance(const CodeIndex& index,
                                            const PackedCode& query);

// True iff the two label sets share a category.
bool relevant(const LabelSet& query, const LabelSet& item);

// Relevance flags of the database in ranked order for one query.
std::vector<std::uint8_t> ranked_relevance(const CodeIndex& index,
                                           const PackedCode& query,
                                           const LabelSet& query_labels);

// AP over the top N: sum of precision@r at relevant ranks divided by the number
// of relevant items within the top N (0 if there are none).
double average_precision_at_n(std::span<const std::uint8_t> ranked_relevance,
                              std::size_t n);

double mean_average_precision(const CodeIndex& index, const QuerySet& queries,
                              std::size_t n);

struct RankPrecision {
  std::size_t rank = 0;
  double precision = 0.0;
};

struct RecallPrecision {
  double recall = 0.0;
  double precision = 0.0;
};

// Mean precision over queries at ranks 1..min(max_n, database size).
std::vector<RankPrecision> precision_at_n_curve(const CodeIndex& index,
                                                const QuerySet& queries,
                                                std::size_t max_n);

// Mean precision among database items within `radius` of each query; a query
// with an empty ball contributes 0.
double precision_within_radius(const CodeIndex& index, const QuerySet& queries,
                               std::size_t radius = 2);

// Rank-based PR curve, one point per cutoff 1..n. A query with no relevant
// items contributes recall 1 (nothing to miss).
std::vector<RecallPrecision> pr_curve(const CodeIndex& index,
                                      const QuerySet& queries);

// m x m matrix: entry (i, j) is the mean distance between center j and the
// codes assigned to center i. Rows without codes are NaN. Codes whose group is
// negative are skipped.
struct DistanceMatrix {
  std::size_t m = 0;
  std::vector<double> values;  // row-major
  std::vector<std::size_t> group_sizes;

  double operator()(std::size_t i, std::size_t j) const {
    return values[i * m + j];
  }
  bool row_empty(std::size_t i) const { return group_sizes[i] == 0; }
};

DistanceMatrix center_distance_matrix(std::span<const PackedCode> codes,
                                      std::span<const std::int64_t> groups,
                                      const CenterSet& centers);

struct EvalReport {
  std::size_t map_n = 0;
  double map_at_n = 0.0;
  std::size_t radius = 2;
  double p_at_radius = 0.0;
  std::vector<RankPrecision> precision_at_n;
  std::vector<RecallPrecision> pr_curve;
  std::size_t num_queries = 0;
  std::size_t num_database = 0;
  std::size_t code_bits = 0;
  double seconds = 0.0;  // wall time, not serialized
};

struct EvalOptions {
  std::size_t map_n = 1000;
  std::size_t radius = 2;
  // Longest rank in the P@N series; 0 means the full database.
  std::size_t max_rank = 0;
};

// All metrics in one pass per query. Produces the same numbers as the
// individual metric functions.
EvalReport evaluate(const CodeIndex& index, const QuerySet& queries,
                    const EvalOptions& options);

}  // namespace csq
