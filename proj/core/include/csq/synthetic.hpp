#pragma once

#include <cstddef>
#include <cstdint>

#include "csq/dataset.hpp"

namespace csq {

struct BlobSpec {
  std::size_t classes = 8;
  std::size_t per_class = 100;
  std::size_t dim = 32;
  double spread = 0.1;
  std::uint64_t seed = 0;
};

// Gaussian blobs around class means drawn uniformly on the unit sphere.
// Samples are class-major (class 0 first). The class means depend only on
// spec.seed; `draw` selects an independent sample stream, so draw 1 yields a
// held-out set around the same means as draw 0.
Dataset make_synthetic_blobs(const BlobSpec& spec, std::uint64_t draw = 0);

}  // namespace csq
