#include "csq/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <utility>

#include "csq/csv.hpp"
#include "csq/dataset.hpp"
#include "csq/error.hpp"
#include "csq/formats.hpp"
#include "csq/synthetic.hpp"

namespace csq {
namespace {

// Runs `fn`, rethrowing any failure tagged with the stage name.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

Dataset load_split(const std::filesystem::path& features,
                   const std::filesystem::path& labels, Split split) {
  Dataset d;
  d.features = load_features(features);
  d.labels = load_labels(labels);
  d.split = split;
  d.validate();
  return d;
}

struct Splits {
  Dataset train;
  Dataset query;
  std::optional<Dataset> database;  // empty: database is the training split

  const Dataset& db() const { return database ? *database : train; }
};

Splits load_data(const RunConfig& cfg) {
  Splits s;
  if (cfg.synthetic()) {
    s.train = make_synthetic_blobs(cfg.synth, 0);
    BlobSpec query_spec = cfg.synth;
    query_spec.per_class = cfg.synth_query_per_class;
    s.query = make_synthetic_blobs(query_spec, 1);
    s.query.split = Split::kQuery;
  } else {
    s.train = load_split(cfg.train_features, cfg.train_labels, Split::kTrain);
    s.query = load_split(cfg.query_features, cfg.query_labels, Split::kQuery);
    if (!cfg.db_features.empty()) {
      s.database = load_split(cfg.db_features, cfg.db_labels, Split::kDatabase);
    }
  }
  const Dataset* others[] = {&s.query, &s.db()};
  for (const Dataset* d : others) {
    if (d->dim() != s.train.dim()) {
      throw Error(ErrorKind::kDimension,
                  std::string(to_string(d->split)) +
                      " features differ in dimension from training features");
    }
    if (d->categories() != s.train.categories()) {
      throw Error(ErrorKind::kDimension,
                  std::string(to_string(d->split)) +
                      " labels differ in category count from training labels");
    }
  }
  return s;
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& cfg) {
  stage("config", [&] { cfg.validate(); });

  const Splits data = stage("load", [&] { return load_data(cfg); });

  CenterSet centers = stage("gen-centers", [&] {
    const std::size_t m = cfg.m == 0 ? data.train.categories() : cfg.m;
    return cfg.method ? generate_centers(m, cfg.k, *cfg.method, cfg.seed)
                      : generate_centers(m, cfg.k, cfg.seed);
  });

  const SemanticCenterMap targets = stage("assign", [&] {
    const bool single = std::all_of(data.train.labels.begin(), data.train.labels.end(),
                                    [](const LabelSet& l) { return l.count() == 1; });
    return single ? assign_single_label(centers, data.train.labels)
                  : assign_multi_label(centers, data.train.labels, cfg.seed);
  });

  TrainResult trained = stage("train", [&] {
    TrainConfig tc = cfg.train;
    tc.seed = cfg.seed;
    return train(data.train.features, targets, tc);
  });

  struct Encoded {
    std::vector<PackedCode> train, db, query;
  };
  const Encoded codes = stage("encode", [&] {
    Encoded e;
    e.train = encode(trained.model, data.train.features);
    e.db = data.database ? encode(trained.model, data.database->features) : e.train;
    e.query = encode(trained.model, data.query.features);
    return e;
  });

  PipelineResult result{std::move(centers), {}, {}, {}, 0.0};
  stage("eval", [&] {
    const CodeIndex index(codes.db, data.db().labels);
    const QuerySet queries{codes.query, data.query.labels};
    result.report = evaluate(index, queries, {cfg.map_n, cfg.radius, 0});

    std::vector<std::int64_t> groups(codes.train.size());
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      const auto idx = targets.center_index_of(i);
      groups[i] = idx ? static_cast<std::int64_t>(*idx) : -1;
      total += hamming_distance(codes.train[i], targets.center_of(i));
    }
    result.distances = center_distance_matrix(codes.train, groups, result.centers);
    result.mean_center_distance =
        static_cast<double>(total) / static_cast<double>(codes.train.size());
  });

  stage("write", [&] {
    std::filesystem::create_directories(cfg.out_dir);
    save_centers(cfg.out_dir / "centers.csqh", result.centers);
    save_assignments(cfg.out_dir / "assignments.csqa", targets);
    save_model(cfg.out_dir / "model.csqm", trained.model);
    save_codes(cfg.out_dir / "db_codes.csqc", codes.db, cfg.k);
    save_codes(cfg.out_dir / "query_codes.csqc", codes.query, cfg.k);
    write_text_file(cfg.out_dir / "report.csv", report_to_csv(result.report));
    write_text_file(cfg.out_dir / "distmat.csv",
                    distance_matrix_to_csv(result.distances));
  });

  result.epoch_losses = std::move(trained.epoch_losses);
  return result;
}

}  // namespace csq
