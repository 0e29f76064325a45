#include "csq/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "csq/error.hpp"
#include "csq/rng.hpp"

namespace csq {
namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// y = W x + b for a row-major (out x in) W.
void affine(std::span<const double> w, std::span<const double> b,
            std::span<const double> x, std::span<double> y) {
  const std::size_t in = x.size();
  for (std::size_t o = 0; o < y.size(); ++o) {
    const double* row = w.data() + o * in;
    double acc = b[o];
    for (std::size_t i = 0; i < in; ++i) acc += row[i] * x[i];
    y[o] = acc;
  }
}

// Per-sample activations kept for the backward pass.
struct Activations {
  std::vector<double> z1, a1, z2, a2, h;
};

void run_forward(const HashModel& model, std::span<const double> x,
                 Activations& act) {
  const auto& s = model.sizes();
  act.z1.resize(s[1]);
  act.a1.resize(s[1]);
  act.z2.resize(s[2]);
  act.a2.resize(s[2]);
  act.h.resize(s[3]);
  affine(model.weights(0), model.bias(0), x, act.z1);
  for (std::size_t i = 0; i < s[1]; ++i) act.a1[i] = std::max(0.0, act.z1[i]);
  affine(model.weights(1), model.bias(1), act.a1, act.z2);
  for (std::size_t i = 0; i < s[2]; ++i) act.a2[i] = std::max(0.0, act.z2[i]);
  affine(model.weights(2), model.bias(2), act.a2, act.h);
  for (double& v : act.h) v = sigmoid(v);
}

void check_input(const HashModel& model, std::size_t dim) {
  if (dim != model.input_dim()) {
    throw Error(ErrorKind::kDimension,
                "feature dimension " + std::to_string(dim) +
                    " does not match model input " +
                    std::to_string(model.input_dim()));
  }
}

void check_batch(const Matrix& h, std::span<const PackedCode> centers) {
  if (h.rows() != centers.size()) {
    throw Error(ErrorKind::kDimension,
                std::to_string(h.rows()) + " codes but " +
                    std::to_string(centers.size()) + " centers");
  }
}

double sign_or_zero(double u) { return u > 0 ? 1.0 : (u < 0 ? -1.0 : 0.0); }

bool quantization_active(const TrainConfig& cfg) {
  return cfg.toggles.use_quantization && cfg.lambda1 != 0.0;
}

}  // namespace

LayerSizes default_layer_sizes(std::size_t input_dim, std::size_t code_length) {
  if (input_dim >= 1024) return {input_dim, 1024, 512, code_length};
  return {input_dim, std::max<std::size_t>(1, input_dim),
          std::max<std::size_t>(1, input_dim / 2), code_length};
}

HashModel::HashModel(const LayerSizes& sizes)
    : sizes_(sizes), params_(parameter_count(sizes), 0.0) {
  for (std::size_t s : sizes) {
    if (s == 0) throw Error(ErrorKind::kInvalidDimension, "zero layer width");
  }
}

HashModel HashModel::initialize(const LayerSizes& sizes, std::uint64_t seed) {
  HashModel model(sizes);
  Rng rng(derive_seed(seed, "init"));
  for (std::size_t l = 0; l < 3; ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(sizes[l]));
    for (double& w : model.weights(l)) w = rng.uniform(-bound, bound);
    for (double& b : model.bias(l)) b = rng.uniform(-bound, bound);
  }
  return model;
}

std::size_t HashModel::parameter_count(const LayerSizes& sizes) {
  std::size_t n = 0;
  for (std::size_t l = 0; l < 3; ++l) n += sizes[l + 1] * (sizes[l] + 1);
  return n;
}

std::size_t HashModel::weight_offset(std::size_t l) const {
  std::size_t off = 0;
  for (std::size_t i = 0; i < l; ++i) off += sizes_[i + 1] * (sizes_[i] + 1);
  return off;
}

std::span<const double> HashModel::weights(std::size_t l) const {
  return {params_.data() + weight_offset(l), sizes_[l + 1] * sizes_[l]};
}
std::span<const double> HashModel::bias(std::size_t l) const {
  return {params_.data() + weight_offset(l) + sizes_[l + 1] * sizes_[l],
          sizes_[l + 1]};
}
std::span<double> HashModel::weights(std::size_t l) {
  return {params_.data() + weight_offset(l), sizes_[l + 1] * sizes_[l]};
}
std::span<double> HashModel::bias(std::size_t l) {
  return {params_.data() + weight_offset(l) + sizes_[l + 1] * sizes_[l],
          sizes_[l + 1]};
}

void TrainConfig::validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorKind::kConfig, msg);
  };
  if (!(lambda1 >= 0.0) || !std::isfinite(lambda1)) fail("lambda1 must be >= 0");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    fail("learning rate must be > 0");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) fail("momentum must be in [0, 1)");
  if (batch_size == 0) fail("batch size must be positive");
  if (!toggles.use_central && !toggles.use_quantization) {
    fail("at least one of the central and quantization losses must be enabled");
  }
  if ((hidden[0] == 0) != (hidden[1] == 0)) {
    fail("hidden widths must both be set or both be zero");
  }
}

std::vector<double> forward(const HashModel& model, std::span<const double> x) {
  check_input(model, x.size());
  Activations act;
  run_forward(model, x, act);
  return std::move(act.h);
}

Matrix forward(const HashModel& model, const Matrix& x) {
  check_input(model, x.cols());
  Matrix h(x.rows(), model.code_length());
  Activations act;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    run_forward(model, x.row(r), act);
    std::copy(act.h.begin(), act.h.end(), h.row(r).begin());
  }
  return h;
}

double central_loss(std::span<const double> h, const PackedCode& center) {
  if (h.size() != center.k()) {
    throw Error(ErrorKind::kDimension,
                "relaxed code has " + std::to_string(h.size()) +
                    " entries, center has " + std::to_string(center.k()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double p = std::clamp(h[i], kBceEpsilon, 1.0 - kBceEpsilon);
    sum += center.bit(i) ? std::log(p) : std::log1p(-p);
  }
  return -sum / static_cast<double>(h.size());
}

double quantization_loss(std::span<const double> h) {
  double sum = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (std::isnan(h[i])) {
      throw Error(ErrorKind::kNumeric,
                  "NaN in relaxed code at position " + std::to_string(i));
    }
    sum += std::log(std::cosh(std::abs(2.0 * h[i] - 1.0) - 1.0));
  }
  return sum;
}

double total_loss(const Matrix& h, std::span<const PackedCode> centers,
                  const TrainConfig& cfg) {
  check_batch(h, centers);
  if (h.rows() == 0) return 0.0;
  const double n = static_cast<double>(h.rows());
  double loss = 0.0;
  if (cfg.toggles.use_central) {
    double lc = 0.0;
    for (std::size_t r = 0; r < h.rows(); ++r) lc += central_loss(h.row(r), centers[r]);
    loss += lc / n;
  }
  if (quantization_active(cfg)) {
    double lq = 0.0;
    for (std::size_t r = 0; r < h.rows(); ++r) lq += quantization_loss(h.row(r));
    loss += cfg.lambda1 * (lq / n);
  }
  return loss;
}

Gradients backward(const HashModel& model, const Matrix& x,
                   std::span<const PackedCode> centers, const TrainConfig& cfg) {
  check_input(model, x.cols());
  if (x.rows() != centers.size()) {
    throw Error(ErrorKind::kDimension,
                std::to_string(x.rows()) + " samples but " +
                    std::to_string(centers.size()) + " centers");
  }
  const auto& s = model.sizes();
  const std::size_t code_len = s[3];
  for (const auto& c : centers) {
    if (c.k() != code_len) {
      throw Error(ErrorKind::kDimension, "center length differs from code length");
    }
  }

  HashModel grad(s);
  Gradients out;
  if (x.rows() == 0) {
    out.values.assign(grad.parameters().begin(), grad.parameters().end());
    return out;
  }

  const double inv_batch = 1.0 / static_cast<double>(x.rows());
  const double central_scale = inv_batch / static_cast<double>(code_len);
  const bool use_lc = cfg.toggles.use_central;
  const bool use_lq = quantization_active(cfg);

  Activations act;
  std::vector<double> d3(code_len), d2(s[2]), d1(s[1]);
  double lc_sum = 0.0;
  double lq_sum = 0.0;

  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto xr = x.row(r);
    run_forward(model, xr, act);
    const PackedCode& c = centers[r];
    if (use_lc) lc_sum += central_loss(act.h, c);
    if (use_lq) lq_sum += quantization_loss(act.h);

    // dL/dz3 through the sigmoid.
    for (std::size_t k = 0; k < code_len; ++k) {
      const double h = act.h[k];
      const double dh_dz = h * (1.0 - h);
      double g = 0.0;
      if (use_lc && h > kBceEpsilon && h < 1.0 - kBceEpsilon) {
        // d/dz of BCE(sigmoid(z)) is h - c; the clamp is flat outside.
        g += central_scale * (h - (c.bit(k) ? 1.0 : 0.0));
      }
      if (use_lq) {
        const double u = 2.0 * h - 1.0;
        g += cfg.lambda1 * inv_batch * std::tanh(std::abs(u) - 1.0) *
             sign_or_zero(u) * 2.0 * dh_dz;
      }
      d3[k] = g;
    }

    // Layer 3.
    {
      auto gw = grad.weights(2);
      auto gb = grad.bias(2);
      const auto w = model.weights(2);
      std::fill(d2.begin(), d2.end(), 0.0);
      for (std::size_t o = 0; o < code_len; ++o) {
        gb[o] += d3[o];
        for (std::size_t i = 0; i < s[2]; ++i) {
          gw[o * s[2] + i] += d3[o] * act.a2[i];
          d2[i] += w[o * s[2] + i] * d3[o];
        }
      }
      for (std::size_t i = 0; i < s[2]; ++i) {
        if (!(act.z2[i] > 0)) d2[i] = 0.0;
      }
    }
    // Layer 2.
    {
      auto gw = grad.weights(1);
      auto gb = grad.bias(1);
      const auto w = model.weights(1);
      std::fill(d1.begin(), d1.end(), 0.0);
      for (std::size_t o = 0; o < s[2]; ++o) {
        gb[o] += d2[o];
        for (std::size_t i = 0; i < s[1]; ++i) {
          gw[o * s[1] + i] += d2[o] * act.a1[i];
          d1[i] += w[o * s[1] + i] * d2[o];
        }
      }
      for (std::size_t i = 0; i < s[1]; ++i) {
        if (!(act.z1[i] > 0)) d1[i] = 0.0;
      }
    }
    // Layer 1.
    {
      auto gw = grad.weights(0);
      auto gb = grad.bias(0);
      for (std::size_t o = 0; o < s[1]; ++o) {
        gb[o] += d1[o];
        for (std::size_t i = 0; i < s[0]; ++i) gw[o * s[0] + i] += d1[o] * xr[i];
      }
    }
  }

  const double n = static_cast<double>(x.rows());
  out.loss = 0.0;
  if (use_lc) out.loss += lc_sum / n;
  if (use_lq) out.loss += cfg.lambda1 * (lq_sum / n);
  out.values.assign(grad.parameters().begin(), grad.parameters().end());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (!std::isfinite(out.values[i])) {
      throw Error(ErrorKind::kNumeric,
                  "non-finite gradient at parameter " + std::to_string(i));
    }
  }
  return out;
}

TrainResult train(const Matrix& features, const SemanticCenterMap& targets,
                  const TrainConfig& cfg) {
  cfg.validate();
  const LayerSizes sizes =
      cfg.hidden[0] == 0
          ? default_layer_sizes(features.cols(), targets.k)
          : LayerSizes{features.cols(), cfg.hidden[0], cfg.hidden[1], targets.k};
  return train(HashModel::initialize(sizes, cfg.seed), features, targets, cfg);
}

TrainResult train(HashModel model, const Matrix& features,
                  const SemanticCenterMap& targets, const TrainConfig& cfg) {
  cfg.validate();
  if (features.rows() == 0) {
    throw Error(ErrorKind::kInvalidDimension, "training set is empty");
  }
  check_input(model, features.cols());
  if (targets.sample_count() != features.rows()) {
    throw Error(ErrorKind::kDimension,
                "center map covers " + std::to_string(targets.sample_count()) +
                    " samples, dataset has " + std::to_string(features.rows()));
  }
  if (targets.k != model.code_length()) {
    throw Error(ErrorKind::kDimension,
                "center length " + std::to_string(targets.k) +
                    " differs from model code length " +
                    std::to_string(model.code_length()));
  }

  const std::size_t n = features.rows();
  Rng shuffle_rng(derive_seed(cfg.seed, "shuffle"));
  std::vector<std::uint32_t> order(n);
  std::vector<double> velocity(model.parameters().size(), 0.0);
  TrainResult result;
  result.epoch_losses.reserve(cfg.epochs);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0u);
    shuffle(std::span<std::uint32_t>(order), shuffle_rng);
    double epoch_sum = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size, ++batch_index) {
      const std::size_t count = std::min(cfg.batch_size, n - start);
      Matrix xb(count, features.cols());
      std::vector<PackedCode> cb;
      cb.reserve(count);
      for (std::size_t j = 0; j < count; ++j) {
        const std::uint32_t idx = order[start + j];
        const auto src = features.row(idx);
        std::copy(src.begin(), src.end(), xb.row(j).begin());
        cb.push_back(targets.center_of(idx));
      }
      Gradients g;
      try {
        g = backward(model, xb, cb, cfg);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kNumeric) throw;
        throw TrainingError(std::string("training diverged: ") + e.what(),
                            epoch, batch_index);
      }
      if (!std::isfinite(g.loss)) {
        throw TrainingError("training diverged: loss is not finite", epoch,
                            batch_index);
      }
      epoch_sum += g.loss * static_cast<double>(count);
      auto params = model.parameters();
      for (std::size_t p = 0; p < params.size(); ++p) {
        velocity[p] = cfg.momentum * velocity[p] + g.values[p];
        params[p] -= cfg.learning_rate * velocity[p];
      }
    }
    result.epoch_losses.push_back(epoch_sum / static_cast<double>(n));
  }
  result.model = std::move(model);
  return result;
}

std::vector<PackedCode> encode(const HashModel& model, const Matrix& features) {
  check_input(model, features.cols());
  std::vector<PackedCode> codes;
  codes.reserve(features.rows());
  Activations act;
  for (std::size_t r = 0; r < features.rows(); ++r) {
    run_forward(model, features.row(r), act);
    codes.push_back(binarize(act.h));
  }
  return codes;
}

}  // namespace csq
