// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "csq/centers.hpp"
#include "csq/formats.hpp"
#include "csq/model.hpp"
#include "csq/pipeline.hpp"
#include "csq/retrieval.hpp"
#include "csq/rng.hpp"
#include "oracles.hpp"

namespace {

using namespace csq;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) {
      pass = false;
      detail = what;
    }
  }
};

PackedCode bits(const std::string& s) {
  std::vector<std::uint8_t> v;
  for (char c : s) v.push_back(c == '1');
  return pack(v);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("csq_acceptance_" + name);
  fs::remove_all(dir);
  return dir;
}

RunConfig desk_scale_run(const fs::path& out) {
  RunConfig cfg;
  cfg.synth = BlobSpec{8, 100, 32, 0.1, 0};
  cfg.k = 16;
  cfg.method = CenterMethod::kHadamard;
  cfg.train = TrainConfig{};
  cfg.train.epochs = 100;
  cfg.map_n = 100;
  cfg.seed = 0;
  cfg.out_dir = out;
  return cfg;
}

Outcome hadamard_separation() {
  Outcome o;
  for (std::size_t k : {4u, 8u, 16u, 32u, 64u}) {
    const CenterSet full = generate_centers(k, k, 0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        o.require(hamming_distance(full[i], full[j]) == k / 2,
                  "k=" + std::to_string(k) + " pair distance != k/2");
      }
    }
    const CenterValidity v = validate_centers(generate_centers(2 * k, k, 0));
    o.require(v.valid && v.mean_distance >= k / 2.0,
              "k=" + std::to_string(k) + " m=2k mean " + num(v.mean_distance));
  }
  o.detail = o.pass ? " all C(k,2) distances = k/2; m=2k valid" : o.detail;
  return o;
}

Outcome bernoulli_mean() {
  Outcome o;
  const CenterValidity v = validate_centers(generate_centers_bernoulli(500, 64, 2024));
  o.require(v.mean_distance >= 31.0 && v.mean_distance <= 33.0, "mean out of [31, 33]");
  o.detail += " mean=" + num(v.mean_distance);
  return o;
}

Outcome multi_label_centroid() {
  Outcome o;
  // Hand-computed majority votes.
  const CenterSet three(4, {bits("1100"), bits("1010"), bits("1001")},
                        CenterMethod::kBernoulli);
  const std::size_t all3[] = {0, 1, 2};
  const std::vector<LabelSet> l3{LabelSet::of(3, all3)};
  o.require(assign_multi_label(three, l3, 0).center_of(0) == bits("1000"),
            "3-center vote != 1000");

  const CenterSet h8 = generate_centers(8, 8, 0);
  const std::size_t rows123[] = {1, 2, 3};
  const std::size_t rows04567[] = {0, 4, 5, 6, 7};
  const std::vector<LabelSet> l8{LabelSet::of(8, rows123), LabelSet::of(8, rows04567)};
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    const SemanticCenterMap m = assign_multi_label(h8, l8, seed);
    o.require(m.center_of(0) == bits("10001000"), "rows {1,2,3} vote != 10001000");
    o.require(m.center_of(1) == bits("11110111"), "rows {0,4,5,6,7} vote != 11110111");
  }

  // Tie frequency: centers 10 and 01 tie on both bits.
  const CenterSet tie(2, {bits("10"), bits("01")}, CenterMethod::kBernoulli);
  const std::size_t both[] = {0, 1};
  const std::vector<LabelSet> lt{LabelSet::of(2, both)};
  std::size_t ones = 0;
  const std::size_t draws = 10000;
  for (std::size_t s = 0; s < draws; ++s) {
    const PackedCode c = assign_multi_label(tie, lt, s).center_of(0);
    ones += c.bit(0) + c.bit(1);
  }
  const double p = static_cast<double>(ones) / (2.0 * draws);
  o.require(p >= 0.48 && p <= 0.52, "tie P(1) out of [0.48, 0.52]");
  o.detail += " tie P(1)=" + num(p);
  return o;
}

Outcome gradient_check() {
  Outcome o;
  Rng rng(4242);
  double worst = 0.0;
  const int shapes = 24;
  for (int t = 0; t < shapes; ++t) {
    const LayerSizes s{1 + rng.below(8), 1 + rng.below(10), 1 + rng.below(10),
                       2 + rng.below(15)};
    TrainConfig cfg;
    cfg.lambda1 = 1e-4;
    cfg.toggles = {true, true};
    const HashModel model = HashModel::initialize(s, rng.next());
    const std::size_t batch = 1 + rng.below(5);
    Matrix x(batch, s[0]);
    for (double& v : x.data()) v = rng.uniform(-1.0, 1.0);
    std::vector<PackedCode> centers;
    for (std::size_t i = 0; i < batch; ++i) {
      PackedCode c(s[3]);
      for (std::size_t b = 0; b < s[3]; ++b) c.set(b, rng.fair_bit());
      centers.push_back(c);
    }
    auto loss = [&](const HashModel& m) { return total_loss(forward(m, x), centers, cfg); };
    const Gradients g = backward(model, x, centers, cfg);
    const double err = oracle::relative_error(
        g.values, oracle::finite_difference_gradient(model, loss, 1e-5));
    worst = std::max(worst, err);
  }
  o.require(worst <= 1e-4, "relative error above 1e-4");
  o.detail += " shapes=" + std::to_string(shapes) + " worst_rel_err=" + num(worst);
  return o;
}

Outcome loss_identities() {
  Outcome o;
  const PackedCode c = bits("1011001110");
  std::vector<double> h(c.k());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = c.bit(i) ? 1.0 : 0.0;
  const double lc = central_loss(h, c);
  o.require(lc <= 1e-6, "L_C(h=c) > 1e-6");
  o.require(quantization_loss(h) == 0.0, "L_Q(binary) != 0");
  const double direct = std::log((std::exp(1.0) + std::exp(-1.0)) / 2.0);
  const double lq = quantization_loss(std::vector<double>{0.5});
  o.require(std::abs(lq - direct) <= 1e-9, "L_Q(0.5) != log cosh 1");
  o.detail += " L_C(h=c)=" + num(lc);
  return o;
}

Outcome metric_oracle() {
  Outcome o;
  Rng rng(31337);
  for (int t = 0; t < 50; ++t) {
    oracle::Instance in;
    const std::size_t n = 1 + rng.below(200);
    const std::size_t q = 1 + rng.below(10);
    const std::size_t k = 1 + rng.below(16);
    const std::size_t nq = 1 + rng.below(10);
    auto code = [&] {
      PackedCode c(k);
      for (std::size_t b = 0; b < k; ++b) c.set(b, rng.fair_bit());
      return c;
    };
    auto label = [&] {
      PackedCode l(q);
      l.set(rng.below(q), true);
      if (rng.uniform() < 0.3) l.set(rng.below(q), true);
      return LabelSet(l);
    };
    for (std::size_t i = 0; i < n; ++i) {
      in.db.push_back(code());
      in.db_labels.push_back(label());
    }
    for (std::size_t i = 0; i < nq; ++i) {
      in.queries.push_back(code());
      in.query_labels.push_back(label());
    }
    const CodeIndex index(in.db, in.db_labels);
    const QuerySet queries{in.queries, in.query_labels};
    const std::size_t map_n = 1 + rng.below(n);
    const EvalReport r = evaluate(index, queries, {map_n, 2, 0});
    const std::string tag = "instance " + std::to_string(t) + ": ";
    o.require(r.map_at_n == oracle::map_at_n(in, map_n), tag + "mAP");
    o.require(mean_average_precision(index, queries, map_n) == r.map_at_n, tag + "mAP fn");
    o.require(r.p_at_radius == oracle::precision_in_ball(in, 2), tag + "P@H=2");
    const auto pn = oracle::precision_curve(in, n);
    const auto pr = oracle::pr(in);
    for (std::size_t i = 0; i < n; ++i) {
      o.require(r.precision_at_n[i].precision == pn[i], tag + "P@N");
      o.require(r.pr_curve[i].recall == pr[i].recall &&
                    r.pr_curve[i].precision == pr[i].precision,
                tag + "PR");
    }
  }
  o.detail += " 50 instances exact";
  return o;
}

Outcome end_to_end(PipelineResult& full_run) {
  Outcome o;
  full_run = run_pipeline(desk_scale_run(scratch("e2e")));
  const auto& dm = full_run.distances;
  double diag = 0.0, off = 0.0;
  std::size_t nd = 0, no = 0;
  for (std::size_t i = 0; i < dm.m; ++i) {
    if (dm.row_empty(i)) continue;
    for (std::size_t j = 0; j < dm.m; ++j) {
      if (i == j) {
        diag += dm(i, j);
        ++nd;
      } else {
        off += dm(i, j);
        ++no;
      }
    }
  }
  diag /= static_cast<double>(nd);
  off /= static_cast<double>(no);
  o.require(full_run.report.map_at_n >= 0.95, "mAP@100 < 0.95");
  o.require(full_run.mean_center_distance <= 2.0, "mean D_H to own center > 2");
  o.require(diag < off, "distance-matrix diagonal not below off-diagonal");
  o.detail += " mAP@100=" + num(full_run.report.map_at_n) +
              " mean_DH=" + num(full_run.mean_center_distance) +
              " diag=" + num(diag) + " offdiag=" + num(off);
  return o;
}

Outcome ablation(const PipelineResult& full_run) {
  Outcome o;
  RunConfig lc_only = desk_scale_run(scratch("lc_only"));
  lc_only.train.toggles.use_quantization = false;
  RunConfig lq_only = desk_scale_run(scratch("lq_only"));
  lq_only.train.toggles.use_central = false;
  const double both = full_run.report.map_at_n;
  const double lc = run_pipeline(lc_only).report.map_at_n;
  const double lq = run_pipeline(lq_only).report.map_at_n;
  o.require(std::abs(lc - both) <= 0.05, "L_C-only not within 0.05 of L_C+L_Q");
  o.require(lq < lc && lq < both, "L_Q-only not worse than both");
  o.detail += " Lc+Lq=" + num(both) + " Lc=" + num(lc) +
              " Lq=" + num(lq);
  return o;
}

Outcome reproducibility() {
  Outcome o;
  RunConfig cfg = desk_scale_run(scratch("repro_a"));
  cfg.train.epochs = 20;
  cfg.seed = 77;
  run_pipeline(cfg);
  const fs::path a = cfg.out_dir;
  cfg.out_dir = scratch("repro_b");
  run_pipeline(cfg);
  for (const char* f : {"centers.csqh", "model.csqm", "db_codes.csqc", "query_codes.csqc",
                        "report.csv", "assignments.csqa", "distmat.csv"}) {
    o.require(read_file(a / f) == read_file(cfg.out_dir / f),
              std::string(f) + " differs between runs");
  }
  o.detail += " 7 artifacts byte-identical";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  PipelineResult full_run{generate_centers(1, 2, 0), {}, {}, {}, 0.0};
  const std::vector<Criterion> criteria{
      {1, "Hadamard center separation", 1.0, hadamard_separation},
      {2, "Bernoulli centers mean distance", 5.0, bernoulli_mean},
      {3, "Multi-label centroid and tie sampling", 5.0, multi_label_centroid},
      {4, "Gradient check vs finite differences", 10.0, gradient_check},
      {5, "Loss identities", 1.0, loss_identities},
      {6, "Metric oracle equivalence", 30.0, metric_oracle},
      {7, "End-to-end desk-scale run", 120.0, [&] { return end_to_end(full_run); }},
      {8, "Ablation direction", 240.0, [&] { return ablation(full_run); }},
      {9, "Reproducibility", 120.0, reproducibility},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass && secs > c.limit_seconds) {
      o.pass = false;
      o.detail += " (exceeded " + num(c.limit_seconds) + " s)";
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %d. %s (%.3f s):%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
