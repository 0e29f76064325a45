#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "csq/centers.hpp"
#include "csq/hamming.hpp"
#include "csq/matrix.hpp"

namespace csq {

// Lower clamp applied to relaxed codes before taking logarithms.
inline constexpr double kBceEpsilon = 1e-7;

// Layer widths {input d, hidden 1, hidden 2, code length K}.
using LayerSizes = std::array<std::size_t, 4>;

// Default hidden widths [1024, 512], scaled by d / 1024 when d < 1024.
LayerSizes default_layer_sizes(std::size_t input_dim, std::size_t code_length);

// Three fully connected layers: ReLU on both hidden layers, logistic sigmoid on
// the output. Parameters live in one flat vector laid out as
// W1, b1, W2, b2, W3, b3 with each W stored row-major (out x in).
class HashModel {
 public:
  HashModel() = default;
  // All-zero parameters.
  explicit HashModel(const LayerSizes& sizes);

  // Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] from the "init" sub-stream.
  static HashModel initialize(const LayerSizes& sizes, std::uint64_t seed);

  const LayerSizes& sizes() const noexcept { return sizes_; }
  std::size_t input_dim() const noexcept { return sizes_[0]; }
  std::size_t code_length() const noexcept { return sizes_[3]; }

  std::span<double> parameters() noexcept { return params_; }
  std::span<const double> parameters() const noexcept { return params_; }

  // Layer l in {0, 1, 2}.
  std::span<const double> weights(std::size_t l) const;
  std::span<const double> bias(std::size_t l) const;
  std::span<double> weights(std::size_t l);
  std::span<double> bias(std::size_t l);

  static std::size_t parameter_count(const LayerSizes& sizes);

  friend bool operator==(const HashModel&, const HashModel&) = default;

 private:
  std::size_t weight_offset(std::size_t l) const;

  LayerSizes sizes_{};
  std::vector<double> params_;
};

struct LossToggles {
  bool use_central = true;
  bool use_quantization = true;
};

struct TrainConfig {
  double lambda1 = 1e-4;
  double learning_rate = 0.01;
  double momentum = 0.9;
  std::size_t batch_size = 16;
  std::size_t epochs = 100;
  std::uint64_t seed = 0;
  LossToggles toggles;
  // {0, 0} selects default_layer_sizes.
  std::array<std::size_t, 2> hidden{0, 0};

  // Throws a config error on out-of-range values or when both losses are off.
  void validate() const;
};

// Relaxed code h in (0,1)^K for one feature vector.
std::vector<double> forward(const HashModel& model, std::span<const double> x);

// Row-wise forward over a batch.
Matrix forward(const HashModel& model, const Matrix& x);

// -(1/K) sum_k [c_k log h_k + (1 - c_k) log(1 - h_k)] with h clamped to
// [eps, 1 - eps].
double central_loss(std::span<const double> h, const PackedCode& center);

// sum_k log cosh(|2 h_k - 1| - 1).
double quantization_loss(std::span<const double> h);

// Batch mean of the enabled terms: [Lc] * L_C + lambda1 * [Lq] * L_Q.
double total_loss(const Matrix& h, std::span<const PackedCode> centers,
                  const TrainConfig& cfg);

struct Gradients {
  double loss = 0.0;
  std::vector<double> values;  // same layout as HashModel::parameters()
};

// Exact gradient of total_loss(forward(model, x), centers, cfg). Throws a
// numeric error if any component is non-finite.
Gradients backward(const HashModel& model, const Matrix& x,
                   std::span<const PackedCode> centers, const TrainConfig& cfg);

struct TrainResult {
  HashModel model;
  std::vector<double> epoch_losses;  // sample-weighted mean L_T per epoch
};

// Mini-batch SGD with momentum (v <- mu v + g; theta <- theta - lr v).
// Samples are reshuffled every epoch from the "shuffle" sub-stream of
// cfg.seed.
TrainResult train(const Matrix& features, const SemanticCenterMap& targets,
                  const TrainConfig& cfg);

// Same, starting from a given model.
TrainResult train(HashModel model, const Matrix& features,
                  const SemanticCenterMap& targets, const TrainConfig& cfg);

// forward + binarize for every row.
std::vector<PackedCode> encode(const HashModel& model, const Matrix& features);

}  // namespace csq
