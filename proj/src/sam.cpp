#include "samgsr/sam.hpp"

#include <algorithm>
#include <cmath>

#include "samgsr/errors.hpp"

namespace samgsr {

CellAccumulator accumulate_cell(const double* values, const std::uint8_t* classes,
                                const std::uint8_t* present, std::size_t n_subjects) {
  CellAccumulator acc;
  for (std::size_t s = 0; s < n_subjects; ++s) {
    if (present && !present[s]) continue;
    int cls = classes[s];
    acc.sum[cls] += values[s];
    acc.n[cls] += 1;
  }
  double mean[2] = {acc.n[0] ? acc.sum[0] / acc.n[0] : 0.0,
                    acc.n[1] ? acc.sum[1] / acc.n[1] : 0.0};
  for (std::size_t s = 0; s < n_subjects; ++s) {
    if (present && !present[s]) continue;
    int cls = classes[s];
    double r = values[s] - mean[cls];
    acc.ss[cls] += r * r;
  }
  return acc;
}

double pooled_scale(const CellAccumulator& acc) {
  int dof = acc.n[0] + acc.n[1] - 2;
  double a = (1.0 / acc.n[1] + 1.0 / acc.n[0]) / dof;
  return std::sqrt(a * (acc.ss[1] + acc.ss[0]));
}

double sam_from_accumulator(const CellAccumulator& acc, double s0) {
  if (acc.n[0] < 2 || acc.n[1] < 2) return 0.0;
  double denom = pooled_scale(acc) + s0;
  if (denom == 0.0) return 0.0;
  double diff = acc.sum[1] / acc.n[1] - acc.sum[0] / acc.n[0];
  return diff / denom;
}

double sam_statistic(const std::vector<double>& values,
                     const std::vector<std::uint8_t>& classes, double s0) {
  if (values.size() != classes.size())
    throw data_error("values and classes differ in length");
  CellAccumulator acc =
      accumulate_cell(values.data(), classes.data(), nullptr, values.size());
  if (acc.n[0] < 2 || acc.n[1] < 2)
    throw data_error("each class needs at least 2 samples");
  double denom = pooled_scale(acc) + s0;
  if (denom == 0.0) throw data_error("degenerate scale: s + s0 == 0");
  return (acc.sum[1] / acc.n[1] - acc.sum[0] / acc.n[0]) / denom;
}

std::vector<double> resolve_s0(const LongitudinalMatrix& matrix,
                               const std::vector<std::uint8_t>& classes,
                               double s0_request) {
  std::size_t T = matrix.n_times();
  if (s0_request >= 0.0) return std::vector<double>(T, s0_request);
  if (s0_request != kAutoS0) throw data_error("s0 must be nonnegative or auto");

  std::size_t G = matrix.n_genes();
  std::size_t S = matrix.n_subjects();
  std::vector<double> s0(T, 0.0);
  std::vector<double> vals(S);
  std::vector<std::uint8_t> pres(S);
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<double> scales;
    scales.reserve(G);
    for (std::size_t g = 0; g < G; ++g) {
      for (std::size_t s = 0; s < S; ++s) {
        vals[s] = matrix.value(g, s, t);
        pres[s] = matrix.is_present(g, s, t) ? 1 : 0;
      }
      CellAccumulator acc =
          accumulate_cell(vals.data(), classes.data(), pres.data(), S);
      if (acc.n[0] >= 2 && acc.n[1] >= 2) scales.push_back(pooled_scale(acc));
    }
    if (scales.empty())
      throw data_error("no usable cell at time point " + matrix.times[t].label);
    std::size_t mid = scales.size() / 2;
    std::nth_element(scales.begin(), scales.begin() + mid, scales.end());
    double hi = scales[mid];
    if (scales.size() % 2 == 0) {
      double lo = *std::max_element(scales.begin(), scales.begin() + mid);
      s0[t] = (lo + hi) / 2.0;
    } else {
      s0[t] = hi;
    }
  }
  return s0;
}

SamMatrix compute_sam_matrix(const LongitudinalMatrix& matrix,
                             const std::vector<std::uint8_t>& classes,
                             double s0_request) {
  return compute_sam_matrix(matrix, classes,
                            resolve_s0(matrix, classes, s0_request));
}

SamMatrix compute_sam_matrix(const LongitudinalMatrix& matrix,
                             const std::vector<std::uint8_t>& classes,
                             const std::vector<double>& s0) {
  std::size_t G = matrix.n_genes();
  std::size_t S = matrix.n_subjects();
  std::size_t T = matrix.n_times();
  if (s0.size() != T) throw data_error("s0 needs one value per time point");
  for (double v : s0)
    if (!(v >= 0.0)) throw data_error("s0 values must be nonnegative");
  SamMatrix out;
  out.n_genes = G;
  out.n_times = T;
  out.d.assign(G * T, 0.0);
  out.usable.assign(G * T, 0);
  out.s0 = s0;

  std::vector<double> vals(S);
  std::vector<std::uint8_t> pres(S);
  for (std::size_t g = 0; g < G; ++g)
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t s = 0; s < S; ++s) {
        vals[s] = matrix.value(g, s, t);
        pres[s] = matrix.is_present(g, s, t) ? 1 : 0;
      }
      CellAccumulator acc =
          accumulate_cell(vals.data(), classes.data(), pres.data(), S);
      if (acc.n[0] < 2 || acc.n[1] < 2) continue;  // unusable, d stays 0
      double denom = pooled_scale(acc) + out.s0[t];
      if (denom == 0.0)
        throw data_error("degenerate scale for gene " + matrix.genes[g] +
                         " at time " + matrix.times[t].label);
      out.d[g * T + t] = (acc.sum[1] / acc.n[1] - acc.sum[0] / acc.n[0]) / denom;
      out.usable[g * T + t] = 1;
    }
  return out;
}

double samgs_statistic(const SamMatrix& sam, const std::vector<std::uint32_t>& cells) {
  double total = 0.0;
  for (std::uint32_t c : cells) {
    if (!sam.usable[c]) continue;
    total += sam.d[c] * sam.d[c];
  }
  return total;
}

}  // namespace samgsr
