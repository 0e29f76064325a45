#pragma once

#include <string>

#include "csq/retrieval.hpp"

namespace csq {

// Shortest round-trip decimal form; NaN prints as "nan".
std::string format_double(double value);

// `metric,value` scalars, then blank-line separated `rank,precision` and
// `recall,precision` tables.
std::string report_to_csv(const EvalReport& report);

// `center_i,center_j,mean_distance` triples, empty rows as nan.
std::string distance_matrix_to_csv(const DistanceMatrix& matrix);

}  // namespace csq
