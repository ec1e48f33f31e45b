#pragma once

#include <string>
#include <vector>

#include "samgsr/types.hpp"

namespace samgsr {

// Expression TSV: header row `gene` followed by `<subject>@<time-label>`
// column names; body rows are a gene id followed by numeric cells, where an
// empty cell means missing.  Time labels are ordered by first appearance in
// the header unless time_order supplies an explicit ordering.
LongitudinalMatrix load_expression(const std::string& path,
                                   const std::vector<std::string>& time_order = {});

// Inverse of load_expression; present cells round-trip bit-exactly.
void write_expression(const LongitudinalMatrix& matrix, const std::string& path);

// Phenotype TSV: `subject<TAB>class` with class in {case, complicated, 1}
// (case) or {control, uncomplicated, 0} (control).
PhenotypeLabels load_labels(const std::string& path);

// Standard GMT: `name<TAB>description<TAB>gene1<TAB>gene2...` per line.
// Duplicate member tokens within a line are collapsed.
GeneSetCollection load_gmt(const std::string& path);

struct CoverageReport {
  size_t genes_in_matrix = 0;
  size_t genes_annotated = 0;  // matrix genes covered by at least one set
  size_t sets_in = 0;
  size_t sets_kept = 0;
  std::string to_string() const;
};

// Drops members absent from the matrix, then sets smaller than min_size.
// Throws data_error if nothing survives.
GeneSetCollection restrict_to_matrix(const GeneSetCollection& collection,
                                     const LongitudinalMatrix& matrix,
                                     size_t min_size,
                                     CoverageReport* report = nullptr);

}  // namespace samgsr
