#include "csq/dataset.hpp"

#include <string>

#include "csq/error.hpp"

namespace csq {

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kQuery: return "query";
    case Split::kDatabase: return "database";
  }
  return "unknown";
}

void Dataset::validate() const {
  if (features.rows() == 0) {
    throw Error(ErrorKind::kInvalidDimension,
                std::string(to_string(split)) + " split is empty");
  }
  if (labels.size() != features.rows()) {
    throw Error(ErrorKind::kDimension,
                std::string(to_string(split)) + " split has " +
                    std::to_string(features.rows()) + " feature rows but " +
                    std::to_string(labels.size()) + " label rows");
  }
  for (const auto& l : labels) {
    if (l.q() != labels.front().q()) {
      throw Error(ErrorKind::kDimension, "label sets over different category counts");
    }
    if (l.count() == 0) throw Error(ErrorKind::kInvalidLabel, "empty label set");
  }
}

}  // namespace csq
