// csq: command-line front end for center generation, assignment, training,
// encoding, evaluation and end-to-end runs.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "csq/centers.hpp"
#include "csq/config.hpp"
#include "csq/csv.hpp"
#include "csq/error.hpp"
#include "csq/formats.hpp"
#include "csq/model.hpp"
#include "csq/pipeline.hpp"
#include "csq/retrieval.hpp"
#include "csq/synthetic.hpp"

namespace {

using csq::Error;
using csq::ErrorKind;

struct GenCentersArgs {
  std::size_t k = 64;
  std::size_t m = 0;
  std::string method = "hadamard";
  std::uint64_t seed = 0;
  std::string out;
};

void gen_centers(const GenCentersArgs& a) {
  const csq::CenterSet centers =
      csq::generate_centers(a.m, a.k, csq::parse_center_method(a.method), a.seed);
  const csq::CenterValidity v = csq::validate_centers(centers);
  csq::save_centers(a.out, centers);
  std::cout << "method=" << csq::to_string(centers.method())
            << " m=" << centers.size() << " k=" << centers.k()
            << " mean_distance=" << csq::format_double(v.mean_distance)
            << " min_distance=" << v.min_distance
            << " valid=" << (v.valid ? "true" : "false") << "\n";
}

struct AssignArgs {
  std::string centers, labels, out, mode = "auto";
  std::uint64_t seed = 0;
};

void assign(const AssignArgs& a) {
  const csq::CenterSet centers = csq::load_centers(a.centers);
  const auto labels = csq::load_labels(a.labels);
  bool single = a.mode == "single";
  if (a.mode == "auto") {
    single = std::all_of(labels.begin(), labels.end(),
                         [](const csq::LabelSet& l) { return l.count() == 1; });
  }
  const csq::SemanticCenterMap map =
      single ? csq::assign_single_label(centers, labels)
             : csq::assign_multi_label(centers, labels, a.seed);
  csq::save_assignments(a.out, map);
  std::cout << "samples=" << map.sample_count()
            << " distinct_targets=" << map.targets.size() << "\n";
}

struct TrainArgs {
  std::string features, labels, centers_map, out_model, loss_log, hidden;
  std::optional<std::size_t> k;
  csq::TrainConfig cfg;
  bool no_lc = false;
  bool no_lq = false;
};

void train(TrainArgs a) {
  const csq::Matrix features = csq::load_features(a.features);
  const csq::SemanticCenterMap map = csq::load_assignments(a.centers_map);
  if (!a.labels.empty()) {
    const auto labels = csq::load_labels(a.labels);
    if (labels.size() != features.rows()) {
      throw Error(ErrorKind::kDimension,
                  std::to_string(labels.size()) + " label rows for " +
                      std::to_string(features.rows()) + " feature rows");
    }
  }
  if (a.k && *a.k != map.k) {
    throw Error(ErrorKind::kDimension,
                "--k " + std::to_string(*a.k) + " but center map has " +
                    std::to_string(map.k) + " bits");
  }
  a.cfg.toggles.use_central = !a.no_lc;
  a.cfg.toggles.use_quantization = !a.no_lq;
  if (!a.hidden.empty()) {
    csq::RunConfig scratch;
    csq::apply_setting(scratch, "hidden", a.hidden);
    a.cfg.hidden = scratch.train.hidden;
  }
  const csq::TrainResult result = csq::train(features, map, a.cfg);
  csq::save_model(a.out_model, result.model);
  if (!a.loss_log.empty()) {
    std::string log = "epoch,loss\n";
    for (std::size_t e = 0; e < result.epoch_losses.size(); ++e) {
      log += std::to_string(e) + "," + csq::format_double(result.epoch_losses[e]) + "\n";
    }
    csq::write_text_file(a.loss_log, log);
  }
  if (!result.epoch_losses.empty()) {
    std::cout << "epochs=" << result.epoch_losses.size()
              << " final_loss=" << csq::format_double(result.epoch_losses.back())
              << "\n";
  }
}

struct EncodeArgs {
  std::string model, features, out_codes;
};

void encode(const EncodeArgs& a) {
  const csq::HashModel model = csq::load_model(a.model);
  const auto codes = csq::encode(model, csq::load_features(a.features));
  csq::save_codes(a.out_codes, codes, model.code_length());
  std::cout << "codes=" << codes.size() << " k=" << model.code_length() << "\n";
}

struct EvalArgs {
  std::string db_codes, db_labels, query_codes, query_labels, out_report;
  csq::EvalOptions options;
};

void eval(const EvalArgs& a) {
  const csq::CodeIndex index(csq::load_codes(a.db_codes), csq::load_labels(a.db_labels));
  const csq::QuerySet queries{csq::load_codes(a.query_codes),
                              csq::load_labels(a.query_labels)};
  const csq::EvalReport report = csq::evaluate(index, queries, a.options);
  csq::write_text_file(a.out_report, csq::report_to_csv(report));
  std::cout << "map@" << report.map_n << "=" << csq::format_double(report.map_at_n)
            << " p@h" << report.radius << "="
            << csq::format_double(report.p_at_radius) << " seconds="
            << report.seconds << "\n";
}

struct DistmatArgs {
  std::string codes, assignments, centers, out;
};

void distmat(const DistmatArgs& a) {
  const auto codes = csq::load_codes(a.codes);
  const csq::SemanticCenterMap map = csq::load_assignments(a.assignments);
  const csq::CenterSet centers = csq::load_centers(a.centers);
  if (map.sample_count() != codes.size()) {
    throw Error(ErrorKind::kDimension,
                std::to_string(codes.size()) + " codes but " +
                    std::to_string(map.sample_count()) + " assignments");
  }
  std::vector<std::int64_t> groups(codes.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto idx = map.center_index_of(i);
    groups[i] = idx ? static_cast<std::int64_t>(*idx) : -1;
  }
  const auto matrix = csq::center_distance_matrix(codes, groups, centers);
  csq::write_text_file(a.out, csq::distance_matrix_to_csv(matrix));
}

struct SynthArgs {
  csq::BlobSpec spec;
  std::uint64_t draw = 0;
  std::string out_prefix;
};

void synth(const SynthArgs& a) {
  const csq::Dataset data = csq::make_synthetic_blobs(a.spec, a.draw);
  csq::save_features(a.out_prefix + ".csqf", data.features);
  csq::save_labels(a.out_prefix + ".csql", data.labels, data.categories());
  std::cout << "n=" << data.size() << " d=" << data.dim()
            << " q=" << data.categories() << "\n";
}

struct RunArgs {
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs;
  std::optional<std::string> out_dir;
  bool no_lc = false;
  bool no_lq = false;
};

void run(const RunArgs& a) {
  csq::RunConfig cfg = a.config.empty() ? csq::RunConfig{} : csq::load_run_config(a.config);
  for (const std::string& kv : a.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kConfig, "--set expects key=value, got '" + kv + "'");
    }
    csq::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (a.seed) cfg.seed = *a.seed;
  if (a.epochs) cfg.train.epochs = *a.epochs;
  if (a.out_dir) cfg.out_dir = *a.out_dir;
  if (a.no_lc) cfg.train.toggles.use_central = false;
  if (a.no_lq) cfg.train.toggles.use_quantization = false;

  const csq::PipelineResult r = csq::run_pipeline(cfg);
  std::cout << "map@" << r.report.map_n << "=" << csq::format_double(r.report.map_at_n)
            << " p@h" << r.report.radius << "="
            << csq::format_double(r.report.p_at_radius)
            << " mean_center_distance=" << csq::format_double(r.mean_center_distance)
            << " out_dir=" << cfg.out_dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Central-similarity hashing toolkit"};
  app.require_subcommand(1);

  GenCentersArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-centers", "Generate hash centers");
  gen_cmd->add_option("--k", gen.k, "Code length in bits")->required();
  gen_cmd->add_option("--m", gen.m, "Number of centers")->required();
  gen_cmd->add_option("--method", gen.method, "hadamard | bernoulli | balanced")
      ->check(CLI::IsMember({"hadamard", "hadamard2k", "bernoulli", "balanced"}));
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--out", gen.out, "Output CSQH file")->required();

  AssignArgs asg;
  auto* asg_cmd = app.add_subcommand("assign", "Assign semantic hash centers to samples");
  asg_cmd->add_option("--centers", asg.centers)->required();
  asg_cmd->add_option("--labels", asg.labels)->required();
  asg_cmd->add_option("--seed", asg.seed);
  asg_cmd->add_option("--mode", asg.mode, "auto | single | multi")
      ->check(CLI::IsMember({"auto", "single", "multi"}));
  asg_cmd->add_option("--out", asg.out, "Output CSQA file")->required();

  TrainArgs tr;
  auto* tr_cmd = app.add_subcommand("train", "Train the hash model");
  tr_cmd->add_option("--features", tr.features)->required();
  tr_cmd->add_option("--labels", tr.labels);
  tr_cmd->add_option("--centers-map", tr.centers_map)->required();
  tr_cmd->add_option("--k", tr.k);
  tr_cmd->add_option("--lambda1", tr.cfg.lambda1);
  tr_cmd->add_option("--lr", tr.cfg.learning_rate);
  tr_cmd->add_option("--momentum", tr.cfg.momentum);
  tr_cmd->add_option("--batch", tr.cfg.batch_size);
  tr_cmd->add_option("--epochs", tr.cfg.epochs);
  tr_cmd->add_option("--seed", tr.cfg.seed);
  tr_cmd->add_option("--hidden", tr.hidden, "Hidden widths as w1,w2");
  tr_cmd->add_flag("--no-lc", tr.no_lc, "Disable the central similarity loss");
  tr_cmd->add_flag("--no-lq", tr.no_lq, "Disable the quantization loss");
  tr_cmd->add_option("--loss-log", tr.loss_log, "Write per-epoch losses as CSV");
  tr_cmd->add_option("--out-model", tr.out_model)->required();

  EncodeArgs enc;
  auto* enc_cmd = app.add_subcommand("encode", "Encode features to binary codes");
  enc_cmd->add_option("--model", enc.model)->required();
  enc_cmd->add_option("--features", enc.features)->required();
  enc_cmd->add_option("--out-codes", enc.out_codes)->required();

  EvalArgs ev;
  auto* ev_cmd = app.add_subcommand("eval", "Evaluate Hamming ranking retrieval");
  ev_cmd->add_option("--db-codes", ev.db_codes)->required();
  ev_cmd->add_option("--db-labels", ev.db_labels)->required();
  ev_cmd->add_option("--query-codes", ev.query_codes)->required();
  ev_cmd->add_option("--query-labels", ev.query_labels)->required();
  ev_cmd->add_option("--map-n", ev.options.map_n);
  ev_cmd->add_option("--radius", ev.options.radius);
  ev_cmd->add_option("--max-rank", ev.options.max_rank, "P@N series length, 0 = all");
  ev_cmd->add_option("--out-report", ev.out_report)->required();

  DistmatArgs dm;
  auto* dm_cmd = app.add_subcommand("distmat", "Center-to-code mean distance matrix");
  dm_cmd->add_option("--codes", dm.codes)->required();
  dm_cmd->add_option("--assignments", dm.assignments)->required();
  dm_cmd->add_option("--centers", dm.centers)->required();
  dm_cmd->add_option("--out", dm.out)->required();

  SynthArgs sy;
  auto* sy_cmd = app.add_subcommand("synth", "Write a synthetic Gaussian-blob dataset");
  sy_cmd->add_option("--classes", sy.spec.classes);
  sy_cmd->add_option("--per-class", sy.spec.per_class);
  sy_cmd->add_option("--dim", sy.spec.dim);
  sy_cmd->add_option("--spread", sy.spec.spread);
  sy_cmd->add_option("--seed", sy.spec.seed);
  sy_cmd->add_option("--draw", sy.draw, "Sample stream; same means, fresh samples");
  sy_cmd->add_option("--out-prefix", sy.out_prefix)->required();

  RunArgs rn;
  auto* rn_cmd = app.add_subcommand("run", "Run the full pipeline from a config file");
  rn_cmd->add_option("--config", rn.config, "key = value config file");
  rn_cmd->add_option("--set", rn.sets, "Override a config key (key=value)");
  rn_cmd->add_option("--seed", rn.seed);
  rn_cmd->add_option("--epochs", rn.epochs);
  rn_cmd->add_option("--out-dir", rn.out_dir);
  rn_cmd->add_flag("--no-lc", rn.no_lc);
  rn_cmd->add_flag("--no-lq", rn.no_lq);

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "gen-centers") gen_centers(gen);
    else if (name == "assign") assign(asg);
    else if (name == "train") train(tr);
    else if (name == "encode") encode(enc);
    else if (name == "eval") eval(ev);
    else if (name == "distmat") distmat(dm);
    else if (name == "synth") synth(sy);
    else if (name == "run") run(rn);
  } catch (const csq::StageError& e) {
    std::cerr << "csq " << name << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "csq: [" << name << "] " << e.what() << "\n";
    return 1;
  }
  return 0;
}
