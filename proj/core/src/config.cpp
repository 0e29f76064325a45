#include "csq/config.hpp"

#include <charconv>
#include <sstream>
#include <string_view>

#include "csq/error.hpp"
#include "csq/formats.hpp"

namespace csq {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* expected) {
  throw Error(ErrorKind::kConfig,
              "key '" + key + "': cannot parse '" + value + "' as " + expected);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end) {
    bad_value(key, value, std::is_floating_point_v<T> ? "a number" : "an integer");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(key, value, "a boolean");
}

}  // namespace

CenterMethod parse_center_method(const std::string& name) {
  if (name == "hadamard") return CenterMethod::kHadamard;
  if (name == "hadamard2k") return CenterMethod::kHadamard2k;
  if (name == "balanced") return CenterMethod::kBalancedRandom;
  if (name == "bernoulli") return CenterMethod::kBernoulli;
  throw Error(ErrorKind::kConfig,
              "unknown center method '" + name +
                  "' (expected hadamard, bernoulli or balanced)");
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kConfig,
                  "line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(std::string_view(stripped).substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorKind::kConfig, "line " + std::to_string(lineno) + ": empty key");
    }
    out[std::move(key)] = trim(std::string_view(stripped).substr(eq + 1));
  }
  return out;
}

void apply_setting(RunConfig& cfg, const std::string& key,
                   const std::string& value) {
  using u64 = std::uint64_t;
  if (key == "train_features") cfg.train_features = value;
  else if (key == "train_labels") cfg.train_labels = value;
  else if (key == "query_features") cfg.query_features = value;
  else if (key == "query_labels") cfg.query_labels = value;
  else if (key == "db_features") cfg.db_features = value;
  else if (key == "db_labels") cfg.db_labels = value;
  else if (key == "out_dir") cfg.out_dir = value;
  else if (key == "synth_classes") cfg.synth.classes = parse_number<std::size_t>(key, value);
  else if (key == "synth_per_class") cfg.synth.per_class = parse_number<std::size_t>(key, value);
  else if (key == "synth_dim") cfg.synth.dim = parse_number<std::size_t>(key, value);
  else if (key == "synth_spread") cfg.synth.spread = parse_number<double>(key, value);
  else if (key == "synth_seed") cfg.synth.seed = parse_number<u64>(key, value);
  else if (key == "synth_query_per_class") cfg.synth_query_per_class = parse_number<std::size_t>(key, value);
  else if (key == "k") cfg.k = parse_number<std::size_t>(key, value);
  else if (key == "m") cfg.m = parse_number<std::size_t>(key, value);
  else if (key == "method") cfg.method = parse_center_method(value);
  else if (key == "lambda1") cfg.train.lambda1 = parse_number<double>(key, value);
  else if (key == "lr") cfg.train.learning_rate = parse_number<double>(key, value);
  else if (key == "momentum") cfg.train.momentum = parse_number<double>(key, value);
  else if (key == "batch") cfg.train.batch_size = parse_number<std::size_t>(key, value);
  else if (key == "epochs") cfg.train.epochs = parse_number<std::size_t>(key, value);
  else if (key == "use_lc") cfg.train.toggles.use_central = parse_bool(key, value);
  else if (key == "use_lq") cfg.train.toggles.use_quantization = parse_bool(key, value);
  else if (key == "hidden") {
    const auto comma = value.find(',');
    if (comma == std::string::npos) bad_value(key, value, "two widths 'w1,w2'");
    cfg.train.hidden[0] = parse_number<std::size_t>(key, trim(value.substr(0, comma)));
    cfg.train.hidden[1] = parse_number<std::size_t>(key, trim(value.substr(comma + 1)));
  }
  else if (key == "map_n") cfg.map_n = parse_number<std::size_t>(key, value);
  else if (key == "radius") cfg.radius = parse_number<std::size_t>(key, value);
  else if (key == "seed") cfg.seed = parse_number<u64>(key, value);
  else throw Error(ErrorKind::kConfig, "unknown key '" + key + "'");
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  RunConfig cfg;
  for (const auto& [key, value] :
       parse_key_values(std::string(bytes.begin(), bytes.end()))) {
    apply_setting(cfg, key, value);
  }
  return cfg;
}

void RunConfig::validate() const {
  if (k < 2) throw Error(ErrorKind::kConfig, "k must be at least 2");
  if (map_n < 1) throw Error(ErrorKind::kConfig, "map_n must be at least 1");
  train.validate();
  if (!synthetic()) {
    if (train_labels.empty() || query_features.empty() || query_labels.empty()) {
      throw Error(ErrorKind::kConfig,
                  "file mode needs train_labels, query_features and query_labels");
    }
    if (db_features.empty() != db_labels.empty()) {
      throw Error(ErrorKind::kConfig, "db_features and db_labels go together");
    }
  } else if (synth_query_per_class == 0) {
    throw Error(ErrorKind::kConfig, "synth_query_per_class must be positive");
  }
}

}  // namespace csq
