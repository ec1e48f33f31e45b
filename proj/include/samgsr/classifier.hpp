#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "samgsr/metrics.hpp"
#include "samgsr/reduction.hpp"
#include "samgsr/types.hpp"

namespace samgsr {

// L2-regularized linear hinge-loss model with logistic calibration. Weights
// act on standardized inputs; posterior(m) = 1 / (1 + exp(a*m + b)) of the
// margin m. When every feature degenerates, the model falls back to the
// calibrated class prior (majority mode).
struct LinearModel {
  std::vector<std::string> features;  // kept features, training order
  std::vector<double> mean;           // training mean per kept feature
  std::vector<double> scale;          // training sd per kept feature, > 0
  std::vector<double> weights;
  double bias = 0.0;
  double platt_a = 0.0;
  double platt_b = 0.0;
  bool majority = false;
  double majority_posterior = 0.5;
  std::vector<std::string> dropped;  // zero-variance features

  double margin(const double* x) const;     // x: raw values, kept-feature order
  double posterior(const double* x) const;  // probability of the case class
};

struct TrainOptions {
  double c = 1.0;           // hinge penalty
  double gap_tol = 1e-6;    // relative duality-gap stopping tolerance
  std::size_t max_sweeps = 20000;
};

// rows: one sample per entry, all of equal width; names label the columns.
// Fixed sweep order makes the fit deterministic.
LinearModel train(const std::vector<std::vector<double>>& rows,
                  const std::vector<std::uint8_t>& labels,
                  const std::vector<std::string>& names,
                  const TrainOptions& options = {});

struct EvaluateOptions {
  TrainOptions train;
};

// Builds the per-time-point feature matrices from the signature's genes at
// that time, trains on the training cohort, and scores both cohorts. Missing
// values are imputed with the training-set per-feature mean. A time point
// with no signature gene yields a pair of rows flagged empty.
MetricsReport evaluate_signature(const Signature& signature,
                                 const LongitudinalMatrix& train_matrix,
                                 const std::vector<std::uint8_t>& train_classes,
                                 const LongitudinalMatrix& test_matrix,
                                 const std::vector<std::uint8_t>& test_classes,
                                 const EvaluateOptions& options = {});

}  // namespace samgsr
