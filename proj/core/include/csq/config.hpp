#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "csq/centers.hpp"
#include "csq/model.hpp"
#include "csq/synthetic.hpp"

namespace csq {

// Inputs, hyperparameters and output locations for one end-to-end run. When
// train_features is empty the run uses synthetic blobs.
struct RunConfig {
  std::filesystem::path train_features;
  std::filesystem::path train_labels;
  std::filesystem::path query_features;
  std::filesystem::path query_labels;
  // Database defaults to the training split when empty.
  std::filesystem::path db_features;
  std::filesystem::path db_labels;
  std::filesystem::path out_dir = "csq_out";

  BlobSpec synth;
  std::size_t synth_query_per_class = 10;

  std::size_t k = 16;
  std::size_t m = 0;  // 0: one center per category
  std::optional<CenterMethod> method;  // unset: generate_centers default
  TrainConfig train;
  std::size_t map_n = 100;
  std::size_t radius = 2;
  std::uint64_t seed = 0;

  bool synthetic() const { return train_features.empty(); }
  void validate() const;
};

// Flat `key = value` lines; '#' starts a comment. Later keys win.
std::map<std::string, std::string> parse_key_values(const std::string& text);

// Applies one key. Unknown keys and malformed values raise a config error.
void apply_setting(RunConfig& cfg, const std::string& key,
                   const std::string& value);

RunConfig load_run_config(const std::filesystem::path& path);

CenterMethod parse_center_method(const std::string& name);

}  // namespace csq
