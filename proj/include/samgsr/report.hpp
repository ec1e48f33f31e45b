#pragma once

#include <string>
#include <vector>

#include "samgsr/metrics.hpp"
#include "samgsr/permutation.hpp"
#include "samgsr/reduction.hpp"
#include "samgsr/simulation.hpp"

namespace samgsr {

// Every writer emits a header line and shortest-round-trip decimals, so a
// repeated run with the same inputs produces byte-identical files.

void write_screen(const std::vector<ScreenRow>& rows, const std::string& path);

void write_signature(const Signature& signature, const std::string& path);

// screen TSV has columns set_name/size/samgs/p/q; signature TSV has
// gene/time_label/d/stage. Loaders for the evaluate/report subcommands:
Signature load_signature(const std::string& path);

void write_overlap(const std::vector<OverlapRow>& rows,
                   const std::vector<TimePoint>& times, const std::string& path);

// One row per (unit, rank): the rank-k item name with its residual p-value
// c_k. The last-ranked item has no c_k and carries an empty cell.
void write_trace(const std::vector<NamedTrace>& traces, const std::string& path);

// Table-1-style pivot: metric rows, cohort:time columns. Time points with an
// empty feature set render as NA.
void write_metrics(const MetricsReport& report, const std::string& path);

// Table-2-style summary: per-time average selected counts plus per-causal-gene
// selection percentages; the final column holds the average unique-gene count.
void write_selection_table(const SelectionFrequencyTable& table,
                           const std::string& path);

void write_subgroup_means(const std::vector<SubgroupMeanRow>& rows,
                          const std::string& path);

// Mean-versus-time curves for one gene, control and case as separate
// polylines (case drawn red). Rows must all belong to `gene`.
std::string subgroup_svg(const std::vector<SubgroupMeanRow>& rows,
                         const std::string& gene);

}  // namespace samgsr
