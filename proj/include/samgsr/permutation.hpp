#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "samgsr/engine.hpp"
#include "samgsr/sam.hpp"
#include "samgsr/types.hpp"

namespace samgsr {

// p = (1 + #{null >= observed}) / (B + 1); never 0, at most 1.
double permutation_pvalue(double observed, const std::vector<double>& null_values);

// Benjamini-Hochberg step-up adjustment, clipped to [0, 1].
std::vector<double> bh_qvalues(const std::vector<double>& p);

enum class FdrMode {
  None,  // q = p; the default, since permutation p-values at practical B are
         // too granular for BH to clear small q cutoffs over many sets
  BH,
};

struct ScreenOptions {
  std::size_t permutations = 1000;
  std::uint64_t seed = 0;
  double s0_request = kAutoS0;
  std::vector<double> s0_list;  // non-empty overrides s0_request, one per time
  double q_cutoff = 0.05;
  FdrMode fdr = FdrMode::None;
  // Draw a set-specific permutation sequence instead of one shared sequence.
  // The per-set salt hashes the set's cell ids, so duplicate sets still get
  // identical p-values.
  bool fresh_perms_per_set = false;
  bool parallel = true;
};

struct ScreenRow {
  std::string set_name;
  std::size_t size = 0;  // member genes after restriction to the matrix
  double samgs = 0.0;
  double p = 1.0;
  double q = 1.0;
};

struct ScreenResult {
  std::vector<ScreenRow> rows;  // ascending p, ties by name
  SamMatrix sam;                // observed statistics the scores came from
  std::vector<std::string> warnings;
};

// Usable cells of one gene, ascending time. Flat ids into a SamMatrix.
std::vector<std::uint32_t> usable_cells(const SamMatrix& sam, std::size_t gene);

// Usable cells of a set: members in listed order, times ascending within each.
std::vector<std::uint32_t> usable_cells(const SamMatrix& sam,
                                        const LongitudinalMatrix& matrix,
                                        const GeneSet& set);

// Salt for a set-specific permutation stream: FNV-1a over the sorted cell ids,
// so the salt depends on the set's content, not its name or position.
std::uint64_t cell_salt(std::vector<std::uint32_t> cells);

// Scores every set by SAMGS and assigns permutation p-values (and q-values per
// the FDR mode). Sets whose cells are all unusable score 0 and get p = 1.
ScreenResult samgs_screen(const LongitudinalMatrix& matrix,
                          const std::vector<std::uint8_t>& classes,
                          const GeneSetCollection& collection,
                          const ScreenOptions& options);

}  // namespace samgsr
