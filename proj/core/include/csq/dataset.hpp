#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "csq/centers.hpp"
#include "csq/matrix.hpp"

namespace csq {

enum class Split { kTrain, kQuery, kDatabase };

std::string_view to_string(Split split);

// Feature rows with aligned label sets.
struct Dataset {
  Matrix features;
  std::vector<LabelSet> labels;
  Split split = Split::kTrain;

  std::size_t size() const noexcept { return features.rows(); }
  std::size_t dim() const noexcept { return features.cols(); }
  std::size_t categories() const noexcept {
    return labels.empty() ? 0 : labels.front().q();
  }

  // Throws unless n >= 1, labels.size() == n and all label sets share q.
  void validate() const;
};

}  // namespace csq
