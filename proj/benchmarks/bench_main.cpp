#include <benchmark/benchmark.h>

#include <vector>

#include "csq/centers.hpp"
#include "csq/model.hpp"
#include "csq/retrieval.hpp"
#include "csq/rng.hpp"
#include "csq/synthetic.hpp"

namespace {

std::vector<csq::PackedCode> random_codes(std::size_t n, std::size_t k, csq::Rng& rng) {
  std::vector<csq::PackedCode> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    csq::PackedCode c(k);
    for (std::size_t b = 0; b < k; ++b) c.set(b, rng.fair_bit());
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<csq::LabelSet> random_labels(std::size_t n, std::size_t q, csq::Rng& rng) {
  std::vector<csq::LabelSet> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(csq::LabelSet::single(q, rng.below(q)));
  return out;
}

void BM_HammingDistance(benchmark::State& state) {
  csq::Rng rng(1);
  const auto codes = random_codes(2, static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(csq::hamming_distance(codes[0], codes[1]));
}
BENCHMARK(BM_HammingDistance)->Arg(16)->Arg(64)->Arg(256);

void BM_RankByDistance(benchmark::State& state) {
  csq::Rng rng(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto db = random_codes(n, 64, rng);
  const csq::CodeIndex index(db, random_labels(n, 10, rng));
  const auto query = random_codes(1, 64, rng);
  for (auto _ : state) benchmark::DoNotOptimize(csq::rank_by_distance(index, query[0]));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_RankByDistance)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_Evaluate(benchmark::State& state) {
  csq::Rng rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  const csq::CodeIndex index(random_codes(n, 32, rng), random_labels(n, 10, rng));
  const csq::QuerySet queries{random_codes(100, 32, rng), random_labels(100, 10, rng)};
  for (auto _ : state) benchmark::DoNotOptimize(csq::evaluate(index, queries, {1000, 2, 0}));
}
BENCHMARK(BM_Evaluate)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_GenerateCenters(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(csq::generate_centers(3 * k, k, 7));
}
BENCHMARK(BM_GenerateCenters)->Arg(64)->Arg(256);

void BM_TrainEpoch(benchmark::State& state) {
  const csq::Dataset data = csq::make_synthetic_blobs(csq::BlobSpec{});
  const csq::CenterSet centers = csq::generate_centers(8, 16, 0);
  const csq::SemanticCenterMap targets = csq::assign_single_label(centers, data.labels);
  csq::TrainConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(csq::train(data.features, targets, cfg));
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
