#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "samgsr/engine.hpp"
#include "samgsr/permutation.hpp"
#include "samgsr/types.hpp"

namespace samgsr {

// Core-subset reduction. Items are ranked by importance; removing the top k
// leaves the residual set, whose permutation p-value is c_k. The core is the
// shortest prefix whose residual is insignificant: the least k with
// c_k > c_cutoff, or all items when every residual stays significant.
struct ReductionTrace {
  std::vector<std::uint32_t> order;  // item indices, most important first
  std::vector<double> residual_p;    // residual_p[k-1] = c_k, k = 1..n-1
  std::size_t core_size = 0;         // chosen k

  bool in_core(std::uint32_t item) const {
    for (std::size_t r = 0; r < core_size; ++r)
      if (order[r] == item) return true;
    return false;
  }
};

// `order` ranks item indices most-important-first; the caller computes the
// ranking. A single item reduces to itself with no c_k evaluated.
ReductionTrace reduce_items(const CellData& data, const PermutationPlan& plan,
                            const std::vector<ItemIndex>& items,
                            const std::vector<std::uint32_t>& order,
                            const std::vector<std::uint8_t>& classes,
                            double c_cutoff, bool parallel);

// Set members ranked by descending sum of d^2 over the gene's usable cells,
// ties by gene id. Returns matrix gene indices.
std::vector<std::size_t> order_genes(const GeneSet& set, const SamMatrix& sam,
                                     const LongitudinalMatrix& matrix);

// One gene's usable cells ranked by descending d^2, ties by ascending time.
std::vector<std::uint32_t> order_time_cells(const SamMatrix& sam, std::size_t gene);

struct SignatureEntry {
  std::string gene;
  std::string time_label;
  int time_index = 0;
  double d = 0.0;
  std::string stage;  // screening unit that carried the pair: set name, or
                      // "self" for the per-gene pipeline
};

struct Signature {
  std::vector<SignatureEntry> entries;  // gene ascending, time ascending

  std::vector<std::string> unique_genes() const;
  std::vector<std::string> genes_at_time(int time_index) const;
};

struct PipelineOptions {
  ScreenOptions screen;
  double c_cutoff_genes = 0.05;
  double c_cutoff_times = 0.05;
};

struct StageCounts {
  std::size_t units_screened = 0;  // gene sets, or genes for the simple path
  std::size_t units_kept = 0;
  std::size_t core_genes = 0;  // after gene-level reduction (union, deduped)
  std::size_t signature_genes = 0;
  std::size_t signature_pairs = 0;
};

// Named trace for optional emission: one reduction unit per entry.
// item_names is indexed by item id; trace.order values index into it.
struct NamedTrace {
  std::string unit;   // set name or gene id
  std::string level;  // "genes" or "times"
  std::vector<std::string> item_names;
  ReductionTrace trace;
};

struct PipelineResult {
  Signature signature;
  ScreenResult screen;
  StageCounts counts;
  std::vector<NamedTrace> traces;
  std::vector<std::string> warnings;
};

// Each gene's time-course cells form one screening unit; kept genes reduce
// over time points. Genes with no usable cell are excluded with a warning.
PipelineResult simple_samgsr(const LongitudinalMatrix& matrix,
                             const std::vector<std::uint8_t>& classes,
                             const PipelineOptions& options);

// Gene sets screen first; kept sets reduce to core genes; the deduplicated
// union of cores reduces over time points. A gene entering through several
// sets is attributed to the first set in screen order.
PipelineResult two_level_samgsr(const LongitudinalMatrix& matrix,
                                const std::vector<std::uint8_t>& classes,
                                const GeneSetCollection& collection,
                                const PipelineOptions& options);

struct OverlapRow {
  std::vector<int> times;  // ascending time indices of the subset
  std::size_t count = 0;   // genes selected at exactly this subset
};

// Counts genes per exact time-point subset, largest subsets first.
std::vector<OverlapRow> overlap_summary(const Signature& signature);

struct SubgroupMeanRow {
  std::string gene;
  std::string time_label;
  int time_index = 0;
  std::string cls;  // "control" or "case"
  double mean = 0.0;
  std::size_t n = 0;
};

// Complete-case class means per (gene, time). Cells with no present sample in
// a class produce no row.
std::vector<SubgroupMeanRow> subgroup_means(const LongitudinalMatrix& matrix,
                                            const std::vector<std::uint8_t>& classes,
                                            const std::vector<std::string>& genes);

}  // namespace samgsr
