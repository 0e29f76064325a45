#include "csq/synthetic.hpp"

#include <cmath>
#include <string>

#include "csq/error.hpp"
#include "csq/rng.hpp"

namespace csq {

Dataset make_synthetic_blobs(const BlobSpec& spec, std::uint64_t draw) {
  if (spec.classes == 0 || spec.per_class == 0 || spec.dim == 0) {
    throw Error(ErrorKind::kInvalidDimension,
                "blob classes, per-class count and dimension must be positive");
  }
  if (!(spec.spread >= 0.0) || !std::isfinite(spec.spread)) {
    throw Error(ErrorKind::kConfig, "blob spread must be finite and >= 0");
  }

  Rng mean_rng(derive_seed(spec.seed, "synth-means"));
  Matrix means(spec.classes, spec.dim);
  for (std::size_t c = 0; c < spec.classes; ++c) {
    auto row = means.row(c);
    double norm = 0.0;
    while (norm == 0.0) {
      norm = 0.0;
      for (double& v : row) {
        v = mean_rng.normal();
        norm += v * v;
      }
      norm = std::sqrt(norm);
    }
    for (double& v : row) v /= norm;
  }

  Rng sample_rng(derive_seed(spec.seed, "synth-draw-" + std::to_string(draw)));
  Dataset data;
  data.features = Matrix(spec.classes * spec.per_class, spec.dim);
  data.labels.reserve(spec.classes * spec.per_class);
  for (std::size_t c = 0; c < spec.classes; ++c) {
    const auto mean = means.row(c);
    const LabelSet label = LabelSet::single(spec.classes, c);
    for (std::size_t s = 0; s < spec.per_class; ++s) {
      auto row = data.features.row(c * spec.per_class + s);
      for (std::size_t j = 0; j < spec.dim; ++j) {
        row[j] = mean[j] + spec.spread * sample_rng.normal();
      }
      data.labels.push_back(label);
    }
  }
  return data;
}

}  // namespace csq
