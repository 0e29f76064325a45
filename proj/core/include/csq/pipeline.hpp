#pragma once

#include <vector>

#include "csq/centers.hpp"
#include "csq/config.hpp"
#include "csq/model.hpp"
#include "csq/retrieval.hpp"

namespace csq {

struct PipelineResult {
  CenterSet centers;
  EvalReport report;
  DistanceMatrix distances;
  std::vector<double> epoch_losses;
  double mean_center_distance = 0.0;  // mean D_H(training code, own target)
};

// gen-centers -> assign -> train -> encode -> eval, writing centers.csqh,
// assignments.csqa, model.csqm, db_codes.csqc, query_codes.csqc, report.csv and
// distmat.csv under cfg.out_dir. Failures are rethrown as StageError.
PipelineResult run_pipeline(const RunConfig& cfg);

}  // namespace csq
