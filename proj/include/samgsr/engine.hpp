#pragma once

#include <cstdint>
#include <vector>

#include "samgsr/sam.hpp"
#include "samgsr/types.hpp"

namespace samgsr {

// Permutation sweeps re-score the same (gene, time) cells under thousands of
// relabelings. The expression values never change, so present samples are
// gathered once per cell, in ascending subject order, and every relabeling is
// scored against that fixed layout. Keeping one gather order makes the
// observed score from the engine bit-identical to compute_sam_matrix and
// makes results independent of how work is split across threads.

struct CellData {
  std::vector<std::uint32_t> cell_ids;    // flat gene * n_times + time
  std::vector<std::uint32_t> offsets;     // n_cells + 1 bounds into samples
  std::vector<double> values;             // gathered sample values
  std::vector<std::uint32_t> subject_of;  // subject index per sample
  std::vector<double> cell_s0;            // s0 of the cell's time point
  std::size_t n_subjects = 0;

  std::size_t n_cells() const { return cell_ids.size(); }
};

// Gathers the listed cells (flat indices) from the matrix. s0 has one entry
// per time point. Cells that are unusable under the observed labeling must be
// filtered out by the caller first; the engine treats every listed cell alike.
CellData gather_cells(const LongitudinalMatrix& matrix,
                      const std::vector<std::uint32_t>& cells,
                      const std::vector<double>& s0);

// d for one gathered cell under an arbitrary labeling. A labeling that leaves
// fewer than 2 present samples in either class, or a zero denominator,
// contributes 0 (null sweeps keep going; the observed pass rejects such cells
// before gathering).
double cell_d(const CellData& data, std::size_t cell, const std::uint8_t* classes);

// An item is any unit that permutation sweeps score: a gene set (all its
// cells), one gene (its cells across time), or one cell. Item scores add d^2
// over the item's gathered-cell indices (positions in CellData, not flat ids).
struct ItemIndex {
  std::vector<std::uint32_t> cells;
};

// Item scores under one labeling; out must hold items.size() entries.
void sweep_item_sums(const CellData& data, const std::uint8_t* classes,
                     const std::vector<ItemIndex>& items, double* out);

// Observed item scores under `classes`.
std::vector<double> observed_item_sums(const CellData& data,
                                       const std::vector<ItemIndex>& items,
                                       const std::vector<std::uint8_t>& classes);

// B relabelings of the observed class vector. Permutation b is produced by a
// counter-based generator keyed on (seed, salt, b), so any subset of the plan
// can be regenerated without replaying the rest and the plan is identical no
// matter which thread asks for which row.
struct PermutationPlan {
  std::size_t n_subjects = 0;
  std::size_t n_perms = 0;
  std::vector<std::uint8_t> labels;  // n_perms rows of n_subjects

  const std::uint8_t* perm(std::size_t b) const { return labels.data() + b * n_subjects; }
};

PermutationPlan make_plan(const std::vector<std::uint8_t>& observed,
                          std::size_t n_perms, std::uint64_t seed,
                          std::uint64_t salt);

// Number of distinct case/control assignments, saturated at 2^63. Used to
// warn when the requested permutation count exceeds the label space.
std::uint64_t distinct_labelings(std::size_t n_case, std::size_t n_control);

// For each item, how many permutations score at or above observed[item].
// Integer counts reduce associatively, so the parallel and serial paths agree
// bit for bit.
std::vector<std::uint64_t> null_exceed_counts(const CellData& data,
                                              const PermutationPlan& plan,
                                              const std::vector<ItemIndex>& items,
                                              const std::vector<double>& observed,
                                              bool parallel);

// Full null score table, laid out perm-major: out[b * n_items + i]. Each entry
// is written exactly once by a pure function of (b, i), so thread count cannot
// change the result.
std::vector<double> null_item_sums(const CellData& data,
                                   const PermutationPlan& plan,
                                   const std::vector<ItemIndex>& items,
                                   bool parallel);

}  // namespace samgsr
