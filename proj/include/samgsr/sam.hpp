#pragma once

#include <cstdint>
#include <vector>

#include "samgsr/types.hpp"

namespace samgsr {

// Moderated two-class statistic for one expression profile:
//   d = (mean_case - mean_control) / (s + s0)
// with the pooled standard error
//   s = sqrt(a * (SS_case + SS_control)),  a = (1/n_case + 1/n_control) / dof,
//   dof = n_case + n_control - 2.
// Sums run in ascending sample order within each class, so relabeling the
// classes negates d exactly.

struct CellAccumulator {
  double sum[2] = {0.0, 0.0};   // indexed by PhenoClass
  double ss[2] = {0.0, 0.0};    // centered sum of squares, second pass
  int n[2] = {0, 0};
};

// Two-pass moment computation over the present samples of one (gene, time)
// cell. values/classes/present are parallel arrays over subjects.
CellAccumulator accumulate_cell(const double* values, const std::uint8_t* classes,
                                const std::uint8_t* present, std::size_t n_subjects);

// Pooled scatter s for an accumulated cell. Requires n >= 2 in both classes.
double pooled_scale(const CellAccumulator& acc);

// d for an accumulated cell; returns 0 when either class has < 2 samples or
// s + s0 == 0 (callers that must reject degenerate cells check first).
double sam_from_accumulator(const CellAccumulator& acc, double s0);

// Convenience wrapper for a single profile with no missing entries.
double sam_statistic(const std::vector<double>& values,
                     const std::vector<std::uint8_t>& classes, double s0);

// Per-(gene, time) d matrix for the whole dataset under one labeling.
// Cells with < 2 present samples in either class are recorded as unusable.
struct SamMatrix {
  std::size_t n_genes = 0;
  std::size_t n_times = 0;
  std::vector<double> d;             // n_genes * n_times, time fastest
  std::vector<std::uint8_t> usable;  // same shape
  std::vector<double> s0;            // per time point

  double at(std::size_t g, std::size_t t) const { return d[g * n_times + t]; }
  bool is_usable(std::size_t g, std::size_t t) const {
    return usable[g * n_times + t] != 0;
  }
};

// s0 policy: a fixed nonnegative value applies to every time point; the
// sentinel s0 = -1 requests the median of the pooled scales s(g, t) over
// genes, taken per time point on the observed labeling and then reused for
// every permutation.
inline constexpr double kAutoS0 = -1.0;

std::vector<double> resolve_s0(const LongitudinalMatrix& matrix,
                               const std::vector<std::uint8_t>& classes,
                               double s0_request);

SamMatrix compute_sam_matrix(const LongitudinalMatrix& matrix,
                             const std::vector<std::uint8_t>& classes,
                             double s0_request);

// Explicit per-time s0 values (all nonnegative, one per time point).
SamMatrix compute_sam_matrix(const LongitudinalMatrix& matrix,
                             const std::vector<std::uint8_t>& classes,
                             const std::vector<double>& s0);

// Set-level statistic: sum of d^2 over the usable cells named by `cells`
// (flat gene * n_times + time indices into a SamMatrix).
double samgs_statistic(const SamMatrix& sam, const std::vector<std::uint32_t>& cells);

}  // namespace samgsr
