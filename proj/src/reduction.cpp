#include "samgsr/reduction.hpp"

#include <omp.h>

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "samgsr/errors.hpp"

namespace samgsr {

namespace {

// counts[k] accumulates #{b : null residual score at removal depth k >=
// observed residual score}, k = 1..n-1. Suffix accumulation runs in the same
// descending-rank order on both sides, so a permutation equal to the observed
// labeling ties exactly.
void residual_exceed_sweep(const CellData& data, const std::uint8_t* classes,
                           const std::vector<ItemIndex>& items,
                           const std::vector<std::uint32_t>& order,
                           const std::vector<double>& observed_suffix,
                           std::vector<double>& scratch,
                           std::uint64_t* counts) {
  std::size_t n = order.size();
  sweep_item_sums(data, classes, items, scratch.data());
  double running = 0.0;
  for (std::size_t k = n; k-- > 1;) {
    running += scratch[order[k]];
    if (running >= observed_suffix[k]) counts[k] += 1;
  }
}

}  // namespace

ReductionTrace reduce_items(const CellData& data, const PermutationPlan& plan,
                            const std::vector<ItemIndex>& items,
                            const std::vector<std::uint32_t>& order,
                            const std::vector<std::uint8_t>& classes,
                            double c_cutoff, bool parallel) {
  std::size_t n = items.size();
  if (order.size() != n) throw data_error("order must rank every item");
  if (n == 0) throw data_error("cannot reduce an empty item list");

  ReductionTrace trace;
  trace.order = order;
  if (n == 1) {
    trace.core_size = 1;
    return trace;
  }

  std::vector<double> observed = observed_item_sums(data, items, classes);
  std::vector<double> observed_suffix(n, 0.0);
  {
    double running = 0.0;
    for (std::size_t k = n; k-- > 1;) {
      running += observed[order[k]];
      observed_suffix[k] = running;
    }
  }

  std::vector<std::uint64_t> counts(n, 0);
  if (!parallel) {
    std::vector<double> scratch(n);
    for (std::size_t b = 0; b < plan.n_perms; ++b)
      residual_exceed_sweep(data, plan.perm(b), items, order, observed_suffix,
                            scratch, counts.data());
  } else {
#pragma omp parallel
    {
      std::vector<std::uint64_t> local(n, 0);
      std::vector<double> scratch(n);
#pragma omp for schedule(static) nowait
      for (long long b = 0; b < static_cast<long long>(plan.n_perms); ++b)
        residual_exceed_sweep(data, plan.perm(static_cast<std::size_t>(b)),
                              items, order, observed_suffix, scratch,
                              local.data());
#pragma omp critical
      for (std::size_t k = 0; k < n; ++k) counts[k] += local[k];
    }
  }

  trace.residual_p.resize(n - 1);
  trace.core_size = n;
  for (std::size_t k = 1; k < n; ++k) {
    double c = static_cast<double>(1 + counts[k]) /
               static_cast<double>(plan.n_perms + 1);
    trace.residual_p[k - 1] = c;
    if (trace.core_size == n && c > c_cutoff) trace.core_size = k;
  }
  return trace;
}

std::vector<std::size_t> order_genes(const GeneSet& set, const SamMatrix& sam,
                                     const LongitudinalMatrix& matrix) {
  struct Scored {
    std::size_t gene;
    double score;
  };
  std::vector<Scored> scored;
  scored.reserve(set.members.size());
  for (const auto& member : set.members) {
    int g = matrix.gene_index(member);
    if (g < 0) throw data_error("set member not in matrix: " + member);
    double score = 0.0;
    for (std::size_t t = 0; t < sam.n_times; ++t)
      if (sam.is_usable(g, t)) score += sam.at(g, t) * sam.at(g, t);
    scored.push_back({static_cast<std::size_t>(g), score});
  }
  std::sort(scored.begin(), scored.end(), [&](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return matrix.genes[a.gene] < matrix.genes[b.gene];
  });
  std::vector<std::size_t> order;
  order.reserve(scored.size());
  for (const auto& s : scored) order.push_back(s.gene);
  return order;
}

std::vector<std::uint32_t> order_time_cells(const SamMatrix& sam, std::size_t gene) {
  std::vector<std::uint32_t> cells;
  for (std::size_t t = 0; t < sam.n_times; ++t)
    if (sam.is_usable(gene, t))
      cells.push_back(static_cast<std::uint32_t>(gene * sam.n_times + t));
  std::sort(cells.begin(), cells.end(), [&](std::uint32_t a, std::uint32_t b) {
    double da = sam.d[a] * sam.d[a];
    double db = sam.d[b] * sam.d[b];
    if (da != db) return da > db;
    return a < b;  // flat id order here is time order within one gene
  });
  return cells;
}

std::vector<std::string> Signature::unique_genes() const {
  std::vector<std::string> genes;
  for (const auto& e : entries) genes.push_back(e.gene);
  std::sort(genes.begin(), genes.end());
  genes.erase(std::unique(genes.begin(), genes.end()), genes.end());
  return genes;
}

std::vector<std::string> Signature::genes_at_time(int time_index) const {
  std::vector<std::string> genes;
  for (const auto& e : entries)
    if (e.time_index == time_index) genes.push_back(e.gene);
  std::sort(genes.begin(), genes.end());
  genes.erase(std::unique(genes.begin(), genes.end()), genes.end());
  return genes;
}

namespace {

// Time-point reduction of one gene, shared by both pipelines. Returns the
// kept flat cell ids plus the trace; empty when the gene has no usable cell.
struct TimeReduction {
  std::vector<std::uint32_t> kept;  // flat cell ids, rank order
  NamedTrace named;
};

TimeReduction reduce_gene_times(const LongitudinalMatrix& matrix,
                                const SamMatrix& sam,
                                const std::vector<std::uint8_t>& classes,
                                const PermutationPlan& plan, std::size_t gene,
                                double c_cutoff, bool parallel) {
  TimeReduction out;
  std::vector<std::uint32_t> flat;  // ascending time
  for (std::size_t t = 0; t < sam.n_times; ++t)
    if (sam.is_usable(gene, t))
      flat.push_back(static_cast<std::uint32_t>(gene * sam.n_times + t));
  if (flat.empty()) return out;

  CellData data = gather_cells(matrix, flat, sam.s0);
  std::vector<ItemIndex> items(flat.size());
  std::vector<std::string> names(flat.size());
  for (std::uint32_t i = 0; i < flat.size(); ++i) {
    items[i].cells = {i};
    names[i] = matrix.times[flat[i] % sam.n_times].label;
  }
  std::vector<std::uint32_t> order(flat.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    double da = sam.d[flat[a]] * sam.d[flat[a]];
    double db = sam.d[flat[b]] * sam.d[flat[b]];
    if (da != db) return da > db;
    return a < b;
  });

  out.named.unit = matrix.genes[gene];
  out.named.level = "times";
  out.named.item_names = std::move(names);
  out.named.trace =
      reduce_items(data, plan, items, order, classes, c_cutoff, parallel);
  for (std::size_t r = 0; r < out.named.trace.core_size; ++r)
    out.kept.push_back(flat[out.named.trace.order[r]]);
  return out;
}

void finalize_signature(PipelineResult& result) {
  auto& entries = result.signature.entries;
  std::sort(entries.begin(), entries.end(),
            [](const SignatureEntry& a, const SignatureEntry& b) {
              if (a.gene != b.gene) return a.gene < b.gene;
              return a.time_index < b.time_index;
            });
  std::unordered_set<std::string> genes;
  for (const auto& e : entries) genes.insert(e.gene);
  result.counts.signature_genes = genes.size();
  result.counts.signature_pairs = entries.size();
}

}  // namespace

PipelineResult simple_samgsr(const LongitudinalMatrix& matrix,
                             const std::vector<std::uint8_t>& classes,
                             const PipelineOptions& options) {
  PipelineResult result;
  SamMatrix sam =
      options.screen.s0_list.empty()
          ? compute_sam_matrix(matrix, classes, options.screen.s0_request)
          : compute_sam_matrix(matrix, classes, options.screen.s0_list);

  GeneSetCollection units;
  std::size_t excluded = 0;
  for (std::size_t g = 0; g < matrix.n_genes(); ++g) {
    bool any = false;
    for (std::size_t t = 0; t < sam.n_times && !any; ++t) any = sam.is_usable(g, t);
    if (!any) {
      ++excluded;
      continue;
    }
    GeneSet unit;
    unit.name = matrix.genes[g];
    unit.members = {matrix.genes[g]};
    units.add(std::move(unit));
  }
  if (excluded > 0)
    result.warnings.push_back(std::to_string(excluded) +
                              " gene(s) with no usable cell excluded before screening");
  if (units.sets.empty()) throw data_error("no usable gene to screen");

  result.screen = samgs_screen(matrix, classes, units, options.screen);
  for (auto& w : result.screen.warnings) result.warnings.push_back(w);
  result.counts.units_screened = units.sets.size();

  std::vector<std::size_t> kept_genes;
  for (const auto& row : result.screen.rows)
    if (row.q <= options.screen.q_cutoff)
      kept_genes.push_back(static_cast<std::size_t>(matrix.gene_index(row.set_name)));
  result.counts.units_kept = kept_genes.size();
  result.counts.core_genes = kept_genes.size();
  if (kept_genes.empty()) {
    result.warnings.push_back("no gene passed screening; signature is empty");
    return result;
  }

  PermutationPlan plan = make_plan(classes, options.screen.permutations,
                                   options.screen.seed, 0);
  std::vector<TimeReduction> reductions(kept_genes.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(kept_genes.size()); ++i)
    reductions[i] = reduce_gene_times(matrix, result.screen.sam, classes, plan,
                                      kept_genes[i], options.c_cutoff_times,
                                      false);

  for (auto& red : reductions) {
    for (std::uint32_t cell : red.kept) {
      SignatureEntry e;
      e.gene = red.named.unit;
      e.time_index = static_cast<int>(cell % result.screen.sam.n_times);
      e.time_label = matrix.times[e.time_index].label;
      e.d = result.screen.sam.d[cell];
      e.stage = "self";
      result.signature.entries.push_back(std::move(e));
    }
    result.traces.push_back(std::move(red.named));
  }
  finalize_signature(result);
  return result;
}

PipelineResult two_level_samgsr(const LongitudinalMatrix& matrix,
                                const std::vector<std::uint8_t>& classes,
                                const GeneSetCollection& collection,
                                const PipelineOptions& options) {
  PipelineResult result;
  result.screen = samgs_screen(matrix, classes, collection, options.screen);
  for (auto& w : result.screen.warnings) result.warnings.push_back(w);
  const SamMatrix& sam = result.screen.sam;
  result.counts.units_screened = collection.sets.size();

  std::size_t unusable_members = 0;
  for (const auto& set : collection.sets)
    for (const auto& member : set.members) {
      std::size_t g = static_cast<std::size_t>(matrix.gene_index(member));
      bool any = false;
      for (std::size_t t = 0; t < sam.n_times && !any; ++t)
        any = sam.is_usable(g, t);
      if (!any) ++unusable_members;
    }
  if (unusable_members > 0)
    result.warnings.push_back(std::to_string(unusable_members) +
                              " set member(s) have no usable cell and carry zero weight");

  std::vector<const GeneSet*> kept_sets;
  for (const auto& row : result.screen.rows)
    if (row.q <= options.screen.q_cutoff)
      kept_sets.push_back(&collection.sets[collection.find(row.set_name)]);
  result.counts.units_kept = kept_sets.size();
  if (kept_sets.empty()) {
    result.warnings.push_back("no gene set passed screening; signature is empty");
    return result;
  }

  PermutationPlan plan = make_plan(classes, options.screen.permutations,
                                   options.screen.seed, 0);

  struct SetReduction {
    std::vector<std::size_t> core;  // matrix gene indices, rank order
    NamedTrace named;
  };
  std::vector<SetReduction> set_reductions(kept_sets.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(kept_sets.size()); ++i) {
    const GeneSet& set = *kept_sets[i];
    std::vector<std::uint32_t> flat;
    std::vector<ItemIndex> items(set.members.size());
    std::vector<std::string> names(set.members.size());
    for (std::size_t m = 0; m < set.members.size(); ++m) {
      names[m] = set.members[m];
      std::size_t g = static_cast<std::size_t>(matrix.gene_index(set.members[m]));
      for (std::size_t t = 0; t < sam.n_times; ++t)
        if (sam.is_usable(g, t)) {
          items[m].cells.push_back(static_cast<std::uint32_t>(flat.size()));
          flat.push_back(static_cast<std::uint32_t>(g * sam.n_times + t));
        }
    }
    CellData data = gather_cells(matrix, flat, sam.s0);
    auto gene_order = order_genes(set, sam, matrix);
    std::unordered_map<std::string, std::uint32_t> member_pos;
    for (std::uint32_t m = 0; m < set.members.size(); ++m)
      member_pos.emplace(set.members[m], m);
    std::vector<std::uint32_t> order;
    order.reserve(gene_order.size());
    for (std::size_t g : gene_order) order.push_back(member_pos.at(matrix.genes[g]));

    SetReduction red;
    red.named.unit = set.name;
    red.named.level = "genes";
    red.named.item_names = std::move(names);
    red.named.trace = reduce_items(data, plan, items, order, classes,
                                   options.c_cutoff_genes, false);
    for (std::size_t r = 0; r < red.named.trace.core_size; ++r)
      red.core.push_back(gene_order[r]);
    set_reductions[i] = std::move(red);
  }

  // Deduplicated union of cores, attributed to the first contributing set in
  // screen order.
  std::vector<std::size_t> union_genes;
  std::vector<std::string> union_stage;
  std::unordered_set<std::size_t> seen;
  for (std::size_t i = 0; i < set_reductions.size(); ++i) {
    for (std::size_t g : set_reductions[i].core)
      if (seen.insert(g).second) {
        union_genes.push_back(g);
        union_stage.push_back(set_reductions[i].named.unit);
      }
    result.traces.push_back(std::move(set_reductions[i].named));
  }
  result.counts.core_genes = union_genes.size();

  std::vector<TimeReduction> time_reductions(union_genes.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(union_genes.size()); ++i)
    time_reductions[i] = reduce_gene_times(matrix, sam, classes, plan,
                                           union_genes[i],
                                           options.c_cutoff_times, false);

  for (std::size_t i = 0; i < time_reductions.size(); ++i) {
    auto& red = time_reductions[i];
    if (red.kept.empty()) continue;  // gene had no usable cell
    for (std::uint32_t cell : red.kept) {
      SignatureEntry e;
      e.gene = matrix.genes[union_genes[i]];
      e.time_index = static_cast<int>(cell % sam.n_times);
      e.time_label = matrix.times[e.time_index].label;
      e.d = sam.d[cell];
      e.stage = union_stage[i];
      result.signature.entries.push_back(std::move(e));
    }
    result.traces.push_back(std::move(red.named));
  }
  finalize_signature(result);
  return result;
}

std::vector<OverlapRow> overlap_summary(const Signature& signature) {
  std::unordered_map<std::string, std::uint64_t> mask_of_gene;
  for (const auto& e : signature.entries) {
    if (e.time_index >= 64) throw data_error("more than 64 time points");
    mask_of_gene[e.gene] |= std::uint64_t{1} << e.time_index;
  }
  std::map<std::uint64_t, std::size_t> counts;
  for (const auto& [gene, mask] : mask_of_gene) counts[mask] += 1;

  std::vector<OverlapRow> rows;
  for (const auto& [mask, count] : counts) {
    OverlapRow row;
    for (int t = 0; t < 64; ++t)
      if (mask & (std::uint64_t{1} << t)) row.times.push_back(t);
    row.count = count;
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const OverlapRow& a, const OverlapRow& b) {
    if (a.times.size() != b.times.size()) return a.times.size() > b.times.size();
    return a.times < b.times;
  });
  return rows;
}

std::vector<SubgroupMeanRow> subgroup_means(const LongitudinalMatrix& matrix,
                                            const std::vector<std::uint8_t>& classes,
                                            const std::vector<std::string>& genes) {
  std::vector<SubgroupMeanRow> rows;
  for (const auto& gene : genes) {
    int g = matrix.gene_index(gene);
    if (g < 0) throw data_error("gene not in matrix: " + gene);
    for (std::size_t t = 0; t < matrix.n_times(); ++t)
      for (int cls = 0; cls < 2; ++cls) {
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t s = 0; s < matrix.n_subjects(); ++s) {
          if (classes[s] != cls) continue;
          if (!matrix.is_present(g, s, t)) continue;
          sum += matrix.value(g, s, t);
          ++n;
        }
        if (n == 0) continue;
        SubgroupMeanRow row;
        row.gene = gene;
        row.time_label = matrix.times[t].label;
        row.time_index = static_cast<int>(t);
        row.cls = cls == 0 ? "control" : "case";
        row.mean = sum / static_cast<double>(n);
        row.n = n;
        rows.push_back(std::move(row));
      }
  }
  return rows;
}

}  // namespace samgsr
