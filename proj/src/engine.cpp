#include "samgsr/engine.hpp"

#include <omp.h>

#include <cmath>

#include "samgsr/errors.hpp"
#include "samgsr/rng.hpp"

namespace samgsr {

CellData gather_cells(const LongitudinalMatrix& matrix,
                      const std::vector<std::uint32_t>& cells,
                      const std::vector<double>& s0) {
  std::size_t S = matrix.n_subjects();
  std::size_t T = matrix.n_times();
  CellData data;
  data.n_subjects = S;
  data.cell_ids = cells;
  data.offsets.reserve(cells.size() + 1);
  data.offsets.push_back(0);
  data.cell_s0.reserve(cells.size());
  for (std::uint32_t id : cells) {
    std::size_t g = id / T;
    std::size_t t = id % T;
    for (std::size_t s = 0; s < S; ++s) {
      if (!matrix.is_present(g, s, t)) continue;
      data.values.push_back(matrix.value(g, s, t));
      data.subject_of.push_back(static_cast<std::uint32_t>(s));
    }
    data.offsets.push_back(static_cast<std::uint32_t>(data.values.size()));
    data.cell_s0.push_back(s0[t]);
  }
  return data;
}

double cell_d(const CellData& data, std::size_t cell, const std::uint8_t* classes) {
  std::uint32_t lo = data.offsets[cell];
  std::uint32_t hi = data.offsets[cell + 1];
  double sum[2] = {0.0, 0.0};
  int n[2] = {0, 0};
  for (std::uint32_t i = lo; i < hi; ++i) {
    int cls = classes[data.subject_of[i]];
    sum[cls] += data.values[i];
    n[cls] += 1;
  }
  if (n[0] < 2 || n[1] < 2) return 0.0;
  double mean[2] = {sum[0] / n[0], sum[1] / n[1]};
  double ss[2] = {0.0, 0.0};
  for (std::uint32_t i = lo; i < hi; ++i) {
    int cls = classes[data.subject_of[i]];
    double r = data.values[i] - mean[cls];
    ss[cls] += r * r;
  }
  int dof = n[0] + n[1] - 2;
  double a = (1.0 / n[1] + 1.0 / n[0]) / dof;
  double denom = std::sqrt(a * (ss[1] + ss[0])) + data.cell_s0[cell];
  if (denom == 0.0) return 0.0;
  return (mean[1] - mean[0]) / denom;
}

void sweep_item_sums(const CellData& data, const std::uint8_t* classes,
                     const std::vector<ItemIndex>& items, double* out) {
  std::vector<double> d2(data.n_cells());
  for (std::size_t c = 0; c < data.n_cells(); ++c) {
    double d = cell_d(data, c, classes);
    d2[c] = d * d;
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    double total = 0.0;
    for (std::uint32_t c : items[i].cells) total += d2[c];
    out[i] = total;
  }
}

std::vector<double> observed_item_sums(const CellData& data,
                                       const std::vector<ItemIndex>& items,
                                       const std::vector<std::uint8_t>& classes) {
  std::vector<double> out(items.size());
  sweep_item_sums(data, classes.data(), items, out.data());
  return out;
}

PermutationPlan make_plan(const std::vector<std::uint8_t>& observed,
                          std::size_t n_perms, std::uint64_t seed,
                          std::uint64_t salt) {
  PermutationPlan plan;
  plan.n_subjects = observed.size();
  plan.n_perms = n_perms;
  plan.labels.assign(n_perms * observed.size(), 0);
  for (std::size_t b = 0; b < n_perms; ++b) {
    std::uint8_t* row = plan.labels.data() + b * plan.n_subjects;
    std::copy(observed.begin(), observed.end(), row);
    SplitMix64 rng(mix_streams(seed, salt, static_cast<std::uint64_t>(b) + 1));
    shuffle(row, plan.n_subjects, rng);
  }
  return plan;
}

std::uint64_t distinct_labelings(std::size_t n_case, std::size_t n_control) {
  const std::uint64_t cap = std::uint64_t{1} << 63;
  std::uint64_t n = n_case + n_control;
  std::uint64_t k = std::min<std::uint64_t>(n_case, n_control);
  // C(n, k) multiplicatively; saturate instead of overflowing.
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    if (result > cap / (n - k + i)) return cap;
    result = result * (n - k + i) / i;
    if (result >= cap) return cap;
  }
  return result;
}

std::vector<std::uint64_t> null_exceed_counts(const CellData& data,
                                              const PermutationPlan& plan,
                                              const std::vector<ItemIndex>& items,
                                              const std::vector<double>& observed,
                                              bool parallel) {
  if (observed.size() != items.size())
    throw data_error("observed scores and items differ in length");
  std::size_t n_items = items.size();
  std::vector<std::uint64_t> counts(n_items, 0);

  if (!parallel) {
    std::vector<double> sums(n_items);
    for (std::size_t b = 0; b < plan.n_perms; ++b) {
      sweep_item_sums(data, plan.perm(b), items, sums.data());
      for (std::size_t i = 0; i < n_items; ++i)
        if (sums[i] >= observed[i]) counts[i] += 1;
    }
    return counts;
  }

#pragma omp parallel
  {
    std::vector<std::uint64_t> local(n_items, 0);
    std::vector<double> sums(n_items);
#pragma omp for schedule(static) nowait
    for (long long b = 0; b < static_cast<long long>(plan.n_perms); ++b) {
      sweep_item_sums(data, plan.perm(static_cast<std::size_t>(b)), items, sums.data());
      for (std::size_t i = 0; i < n_items; ++i)
        if (sums[i] >= observed[i]) local[i] += 1;
    }
#pragma omp critical
    for (std::size_t i = 0; i < n_items; ++i) counts[i] += local[i];
  }
  return counts;
}

std::vector<double> null_item_sums(const CellData& data,
                                   const PermutationPlan& plan,
                                   const std::vector<ItemIndex>& items,
                                   bool parallel) {
  std::size_t n_items = items.size();
  std::vector<double> out(plan.n_perms * n_items);

  if (!parallel) {
    for (std::size_t b = 0; b < plan.n_perms; ++b)
      sweep_item_sums(data, plan.perm(b), items, out.data() + b * n_items);
    return out;
  }

#pragma omp parallel for schedule(static)
  for (long long b = 0; b < static_cast<long long>(plan.n_perms); ++b)
    sweep_item_sums(data, plan.perm(static_cast<std::size_t>(b)), items,
              out.data() + static_cast<std::size_t>(b) * n_items);
  return out;
}

}  // namespace samgsr
