// Timing harness for the permutation engine: serial vs OpenMP sweeps over
// growing workloads. Not a test; prints a table and exits 0.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <vector>

#include "samgsr/engine.hpp"
#include "samgsr/rng.hpp"
#include "samgsr/sam.hpp"
#include "samgsr/types.hpp"

using namespace samgsr;

namespace {

LongitudinalMatrix random_matrix(std::size_t n_genes, std::size_t n_subjects,
                                 std::size_t n_times, std::uint64_t seed) {
  LongitudinalMatrix m;
  for (std::size_t g = 0; g < n_genes; ++g) m.genes.push_back("G" + std::to_string(g));
  for (std::size_t s = 0; s < n_subjects; ++s)
    m.subjects.push_back("S" + std::to_string(s));
  for (std::size_t t = 0; t < n_times; ++t)
    m.times.push_back({static_cast<int>(t), "t" + std::to_string(t)});
  m.allocate();
  SplitMix64 rng(seed);
  for (std::size_t g = 0; g < n_genes; ++g)
    for (std::size_t s = 0; s < n_subjects; ++s)
      for (std::size_t t = 0; t < n_times; ++t) m.set(g, s, t, rng.next_normal());
  m.finalize();
  return m;
}

double time_ms(bool parallel, const CellData& data, const PermutationPlan& plan,
               const std::vector<ItemIndex>& items, const std::vector<double>& obs) {
  double best = 1e300;
  for (int rep = 0; rep < 3; ++rep) {
    auto start = std::chrono::steady_clock::now();
    auto counts = null_exceed_counts(data, plan, items, obs, parallel);
    auto stop = std::chrono::steady_clock::now();
    if (counts.size() != items.size()) return -1;
    best = std::min(best, std::chrono::duration<double, std::milli>(stop - start).count());
  }
  return best;
}

}  // namespace

int main() {
  struct Case {
    std::size_t genes, subjects, times, perms;
  };
  const Case cases[] = {
      {50, 40, 3, 200},
      {200, 40, 3, 400},
      {500, 60, 5, 500},
      {1000, 80, 5, 1000},
  };

  std::printf("%8s %9s %6s %7s %7s | %10s %10s %8s\n", "genes", "subjects",
              "times", "perms", "cells", "serial_ms", "openmp_ms", "speedup");
  for (const auto& c : cases) {
    auto m = random_matrix(c.genes, c.subjects, c.times, 42);
    std::vector<std::uint8_t> classes(c.subjects, 1);
    for (std::size_t s = 0; s < c.subjects / 2; ++s) classes[s] = 0;
    std::vector<double> s0(c.times, 0.1);
    std::vector<std::uint32_t> cells;
    for (std::uint32_t i = 0; i < c.genes * c.times; ++i) cells.push_back(i);
    auto data = gather_cells(m, cells, s0);
    std::vector<ItemIndex> items(c.genes);
    for (std::uint32_t g = 0; g < c.genes; ++g)
      for (std::uint32_t t = 0; t < c.times; ++t)
        items[g].cells.push_back(g * static_cast<std::uint32_t>(c.times) + t);
    auto plan = make_plan(classes, c.perms, 7, 0);
    auto obs = observed_item_sums(data, items, classes);

    double serial = time_ms(false, data, plan, items, obs);
    double par = time_ms(true, data, plan, items, obs);
    std::printf("%8zu %9zu %6zu %7zu %7zu | %10.2f %10.2f %7.2fx\n", c.genes,
                c.subjects, c.times, c.perms, data.n_cells(), serial, par,
                serial / par);
  }
  return 0;
}
