#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace samgsr {

// Binary-classification quality metrics, all over [0, 1]. posteriors[i] is the
// predicted probability of the case class; truths[i] is 1 for case.

// Fraction misclassified at threshold 0.5; a posterior of exactly 0.5
// classifies as case.
double metric_error(const std::vector<double>& posteriors,
                    const std::vector<std::uint8_t>& truths);

// Mean squared error of the case posterior against the 0/1 truth. The
// single-probability form keeps the range [0, 1].
double metric_gbs(const std::vector<double>& posteriors,
                  const std::vector<std::uint8_t>& truths);

// Mean posterior mass assigned to the true class.
double metric_bcm(const std::vector<double>& posteriors,
                  const std::vector<std::uint8_t>& truths);

// Area under the precision-recall curve, case as positive, descending-score
// sweep with tied scores grouped, step interpolation (precision at each new
// recall level weights the recall increment). Throws data_error when no
// positive is present.
double metric_aupr(const std::vector<double>& posteriors,
                   const std::vector<std::uint8_t>& truths);

struct MetricsRow {
  std::string cohort;  // "train" or "test"
  std::string time_label;
  int time_index = 0;
  bool empty = false;  // no signature gene at this time point
  std::size_t n_features = 0;
  double error = 0.0;
  double gbs = 0.0;
  double bcm = 0.0;
  double aupr = 0.0;
};

struct MetricsReport {
  std::vector<MetricsRow> rows;
  std::vector<std::string> warnings;
};

}  // namespace samgsr
