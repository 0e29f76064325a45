#include "csq/retrieval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "csq/error.hpp"

namespace csq {
namespace {

void check_queries(const CodeIndex& index, const QuerySet& queries) {
  if (queries.codes.size() != queries.labels.size()) {
    throw Error(ErrorKind::kDimension, "query codes and labels differ in count");
  }
  if (queries.codes.empty()) {
    throw Error(ErrorKind::kInvalidDimension, "query set is empty");
  }
  for (const auto& c : queries.codes) {
    if (c.k() != index.k()) {
      throw Error(ErrorKind::kDimension,
                  "query code has " + std::to_string(c.k()) +
                      " bits, index has " + std::to_string(index.k()));
    }
  }
}

// Distances of every database code to the query.
std::vector<std::uint32_t> distances_to(const CodeIndex& index,
                                        const PackedCode& query) {
  std::vector<std::uint32_t> dist(index.size());
  const auto codes = index.codes();
  for (std::size_t i = 0; i < dist.size(); ++i) {
    dist[i] = static_cast<std::uint32_t>(hamming_distance(query, codes[i]));
  }
  return dist;
}

// Counting sort on distance in [0, k]; stable, so ties keep index order.
std::vector<std::uint32_t> order_by(const std::vector<std::uint32_t>& dist,
                                    std::size_t k) {
  std::vector<std::uint32_t> start(k + 2, 0);
  for (std::uint32_t d : dist) ++start[d + 1];
  for (std::size_t b = 1; b < start.size(); ++b) start[b] += start[b - 1];
  std::vector<std::uint32_t> order(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    order[start[dist[i]]++] = static_cast<std::uint32_t>(i);
  }
  return order;
}

std::vector<std::uint8_t> relevance_in_order(
    const CodeIndex& index, const std::vector<std::uint32_t>& order,
    const LabelSet& query_labels) {
  std::vector<std::uint8_t> flags(order.size());
  const auto labels = index.labels();
  for (std::size_t r = 0; r < order.size(); ++r) {
    flags[r] = relevant(query_labels, labels[order[r]]) ? 1 : 0;
  }
  return flags;
}

double radius_precision(const CodeIndex& index,
                        const std::vector<std::uint32_t>& dist,
                        const LabelSet& query_labels, std::size_t radius) {
  std::size_t inside = 0;
  std::size_t hits = 0;
  const auto labels = index.labels();
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] <= radius) {
      ++inside;
      if (relevant(query_labels, labels[i])) ++hits;
    }
  }
  return inside == 0 ? 0.0
                     : static_cast<double>(hits) / static_cast<double>(inside);
}

// Adds hits/r at each rank to `sums`.
void accumulate_precision(std::span<const std::uint8_t> flags,
                          std::vector<double>& sums) {
  std::size_t hits = 0;
  for (std::size_t r = 0; r < sums.size(); ++r) {
    hits += flags[r];
    sums[r] += static_cast<double>(hits) / static_cast<double>(r + 1);
  }
}

void accumulate_pr(std::span<const std::uint8_t> flags,
                   std::vector<double>& recall_sums,
                   std::vector<double>& precision_sums) {
  std::size_t total = 0;
  for (std::uint8_t f : flags) total += f;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < flags.size(); ++r) {
    hits += flags[r];
    recall_sums[r] += total == 0 ? 1.0
                                 : static_cast<double>(hits) /
                                       static_cast<double>(total);
    precision_sums[r] += static_cast<double>(hits) / static_cast<double>(r + 1);
  }
}

}  // namespace

CodeIndex::CodeIndex(std::vector<PackedCode> codes, std::vector<LabelSet> labels)
    : codes_(std::move(codes)), labels_(std::move(labels)) {
  if (codes_.size() != labels_.size()) {
    throw Error(ErrorKind::kDimension,
                std::to_string(codes_.size()) + " database codes but " +
                    std::to_string(labels_.size()) + " label sets");
  }
  if (codes_.empty()) {
    throw Error(ErrorKind::kInvalidDimension, "database is empty");
  }
  k_ = codes_.front().k();
  for (const auto& c : codes_) {
    if (c.k() != k_) {
      throw Error(ErrorKind::kDimension, "database codes differ in length");
    }
  }
}

std::vector<std::uint32_t> rank_by_distance(const CodeIndex& index,
                                            const PackedCode& query) {
  if (query.k() != index.k()) {
    throw Error(ErrorKind::kDimension,
                "query has " + std::to_string(query.k()) + " bits, index has " +
                    std::to_string(index.k()));
  }
  return order_by(distances_to(index, query), index.k());
}

bool relevant(const LabelSet& query, const LabelSet& item) {
  return query.intersects(item);
}

std::vector<std::uint8_t> ranked_relevance(const CodeIndex& index,
                                           const PackedCode& query,
                                           const LabelSet& query_labels) {
  return relevance_in_order(index, rank_by_distance(index, query), query_labels);
}

double average_precision_at_n(std::span<const std::uint8_t> ranked_relevance,
                              std::size_t n) {
  const std::size_t top = std::min(n, ranked_relevance.size());
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t r = 0; r < top; ++r) {
    if (ranked_relevance[r]) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
  }
  return hits == 0 ? 0.0 : sum / static_cast<double>(hits);
}

double mean_average_precision(const CodeIndex& index, const QuerySet& queries,
                              std::size_t n) {
  check_queries(index, queries);
  double sum = 0.0;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    sum += average_precision_at_n(
        ranked_relevance(index, queries.codes[q], queries.labels[q]), n);
  }
  return sum / static_cast<double>(queries.size());
}

std::vector<RankPrecision> precision_at_n_curve(const CodeIndex& index,
                                                const QuerySet& queries,
                                                std::size_t max_n) {
  check_queries(index, queries);
  std::vector<double> sums(std::min(max_n, index.size()), 0.0);
  for (std::size_t q = 0; q < queries.size(); ++q) {
    accumulate_precision(
        ranked_relevance(index, queries.codes[q], queries.labels[q]), sums);
  }
  std::vector<RankPrecision> curve(sums.size());
  for (std::size_t r = 0; r < sums.size(); ++r) {
    curve[r] = {r + 1, sums[r] / static_cast<double>(queries.size())};
  }
  return curve;
}

double precision_within_radius(const CodeIndex& index, const QuerySet& queries,
                               std::size_t radius) {
  check_queries(index, queries);
  double sum = 0.0;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    sum += radius_precision(index, distances_to(index, queries.codes[q]),
                            queries.labels[q], radius);
  }
  return sum / static_cast<double>(queries.size());
}

std::vector<RecallPrecision> pr_curve(const CodeIndex& index,
                                      const QuerySet& queries) {
  check_queries(index, queries);
  std::vector<double> recall_sums(index.size(), 0.0);
  std::vector<double> precision_sums(index.size(), 0.0);
  for (std::size_t q = 0; q < queries.size(); ++q) {
    accumulate_pr(ranked_relevance(index, queries.codes[q], queries.labels[q]),
                  recall_sums, precision_sums);
  }
  const double nq = static_cast<double>(queries.size());
  std::vector<RecallPrecision> curve(index.size());
  for (std::size_t r = 0; r < curve.size(); ++r) {
    curve[r] = {recall_sums[r] / nq, precision_sums[r] / nq};
  }
  return curve;
}

DistanceMatrix center_distance_matrix(std::span<const PackedCode> codes,
                                      std::span<const std::int64_t> groups,
                                      const CenterSet& centers) {
  if (codes.size() != groups.size()) {
    throw Error(ErrorKind::kDimension, "codes and group assignments differ in count");
  }
  const std::size_t m = centers.size();
  std::vector<std::uint64_t> totals(m * m, 0);
  DistanceMatrix out;
  out.m = m;
  out.group_sizes.assign(m, 0);
  for (std::size_t s = 0; s < codes.size(); ++s) {
    if (groups[s] < 0) continue;
    const auto g = static_cast<std::size_t>(groups[s]);
    if (g >= m) {
      throw Error(ErrorKind::kInsufficientCenters,
                  "code " + std::to_string(s) + " assigned to center " +
                      std::to_string(g) + " of " + std::to_string(m));
    }
    ++out.group_sizes[g];
    for (std::size_t j = 0; j < m; ++j) {
      totals[g * m + j] += hamming_distance(codes[s], centers[j]);
    }
  }
  out.values.assign(m * m, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < m; ++i) {
    if (out.group_sizes[i] == 0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      out.values[i * m + j] = static_cast<double>(totals[i * m + j]) /
                              static_cast<double>(out.group_sizes[i]);
    }
  }
  return out;
}

EvalReport evaluate(const CodeIndex& index, const QuerySet& queries,
                    const EvalOptions& options) {
  check_queries(index, queries);
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = index.size();
  const std::size_t max_rank =
      options.max_rank == 0 ? n : std::min(options.max_rank, n);

  double ap_sum = 0.0;
  double radius_sum = 0.0;
  std::vector<double> p_sums(max_rank, 0.0);
  std::vector<double> recall_sums(n, 0.0);
  std::vector<double> precision_sums(n, 0.0);

  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto dist = distances_to(index, queries.codes[q]);
    const auto flags = relevance_in_order(index, order_by(dist, index.k()),
                                          queries.labels[q]);
    ap_sum += average_precision_at_n(flags, options.map_n);
    radius_sum += radius_precision(index, dist, queries.labels[q], options.radius);
    accumulate_precision(flags, p_sums);
    accumulate_pr(flags, recall_sums, precision_sums);
  }

  const double nq = static_cast<double>(queries.size());
  EvalReport report;
  report.map_n = options.map_n;
  report.map_at_n = ap_sum / nq;
  report.radius = options.radius;
  report.p_at_radius = radius_sum / nq;
  report.precision_at_n.resize(max_rank);
  for (std::size_t r = 0; r < max_rank; ++r) {
    report.precision_at_n[r] = {r + 1, p_sums[r] / nq};
  }
  report.pr_curve.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    report.pr_curve[r] = {recall_sums[r] / nq, precision_sums[r] / nq};
  }
  report.num_queries = queries.size();
  report.num_database = n;
  report.code_bits = index.k();
  report.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

}  // namespace csq
