#include "samgsr/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "samgsr/errors.hpp"

namespace samgsr {

double permutation_pvalue(double observed, const std::vector<double>& null_values) {
  std::size_t count = 0;
  for (double v : null_values)
    if (v >= observed) ++count;
  return static_cast<double>(1 + count) / static_cast<double>(null_values.size() + 1);
}

std::vector<double> bh_qvalues(const std::vector<double>& p) {
  std::size_t n = p.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  std::vector<double> q(n, 0.0);
  double running = 1.0;
  for (std::size_t r = n; r-- > 0;) {
    double adjusted = p[idx[r]] * static_cast<double>(n) / static_cast<double>(r + 1);
    running = std::min(running, adjusted);
    q[idx[r]] = running;
  }
  return q;
}

std::vector<std::uint32_t> usable_cells(const SamMatrix& sam, std::size_t gene) {
  std::vector<std::uint32_t> cells;
  for (std::size_t t = 0; t < sam.n_times; ++t)
    if (sam.is_usable(gene, t))
      cells.push_back(static_cast<std::uint32_t>(gene * sam.n_times + t));
  return cells;
}

std::vector<std::uint32_t> usable_cells(const SamMatrix& sam,
                                        const LongitudinalMatrix& matrix,
                                        const GeneSet& set) {
  std::vector<std::uint32_t> cells;
  for (const auto& member : set.members) {
    int g = matrix.gene_index(member);
    if (g < 0) throw data_error("set member not in matrix: " + member);
    auto gene_cells = usable_cells(sam, static_cast<std::size_t>(g));
    cells.insert(cells.end(), gene_cells.begin(), gene_cells.end());
  }
  // canonical order: scores must depend on set content, not member order
  std::sort(cells.begin(), cells.end());
  return cells;
}

std::uint64_t cell_salt(std::vector<std::uint32_t> cells) {
  std::sort(cells.begin(), cells.end());
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint32_t c : cells)
    for (int byte = 0; byte < 4; ++byte) {
      h ^= (c >> (8 * byte)) & 0xFF;
      h *= 1099511628211ULL;
    }
  return h;
}

ScreenResult samgs_screen(const LongitudinalMatrix& matrix,
                          const std::vector<std::uint8_t>& classes,
                          const GeneSetCollection& collection,
                          const ScreenOptions& options) {
  if (collection.sets.empty()) throw data_error("no gene sets to screen");
  if (options.permutations < 1) throw data_error("permutations must be >= 1");

  ScreenResult result;
  result.sam = options.s0_list.empty()
                   ? compute_sam_matrix(matrix, classes, options.s0_request)
                   : compute_sam_matrix(matrix, classes, options.s0_list);
  const SamMatrix& sam = result.sam;

  std::size_t n_sets = collection.sets.size();
  std::vector<std::vector<std::uint32_t>> set_cells(n_sets);
  std::vector<std::uint32_t> union_cells;
  for (std::size_t i = 0; i < n_sets; ++i) {
    set_cells[i] = usable_cells(sam, matrix, collection.sets[i]);
    union_cells.insert(union_cells.end(), set_cells[i].begin(), set_cells[i].end());
  }
  std::sort(union_cells.begin(), union_cells.end());
  union_cells.erase(std::unique(union_cells.begin(), union_cells.end()),
                    union_cells.end());
  std::unordered_map<std::uint32_t, std::uint32_t> position;
  position.reserve(union_cells.size());
  for (std::uint32_t i = 0; i < union_cells.size(); ++i)
    position.emplace(union_cells[i], i);

  CellData data = gather_cells(matrix, union_cells, sam.s0);
  std::vector<ItemIndex> items(n_sets);
  for (std::size_t i = 0; i < n_sets; ++i) {
    items[i].cells.reserve(set_cells[i].size());
    for (std::uint32_t id : set_cells[i]) items[i].cells.push_back(position.at(id));
  }

  std::vector<double> observed = observed_item_sums(data, items, classes);

  std::size_t B = options.permutations;
  std::vector<std::uint64_t> counts(n_sets, 0);
  if (options.fresh_perms_per_set) {
    for (std::size_t i = 0; i < n_sets; ++i) {
      PermutationPlan plan =
          make_plan(classes, B, options.seed, cell_salt(set_cells[i]));
      std::vector<ItemIndex> one = {items[i]};
      std::vector<double> obs_one = {observed[i]};
      counts[i] = null_exceed_counts(data, plan, one, obs_one, options.parallel)[0];
    }
  } else {
    PermutationPlan plan = make_plan(classes, B, options.seed, 0);
    counts = null_exceed_counts(data, plan, items, observed, options.parallel);
  }

  std::size_t n_case = 0;
  for (std::uint8_t c : classes) n_case += c;
  std::uint64_t space = distinct_labelings(n_case, classes.size() - n_case);
  if (B > space)
    result.warnings.push_back(
        "requested " + std::to_string(B) + " permutations but only " +
        std::to_string(space) +
        " distinct labelings exist; p-values will repeat");

  std::vector<double> p(n_sets);
  for (std::size_t i = 0; i < n_sets; ++i)
    p[i] = static_cast<double>(1 + counts[i]) / static_cast<double>(B + 1);
  std::vector<double> q = options.fdr == FdrMode::BH ? bh_qvalues(p) : p;

  result.rows.resize(n_sets);
  for (std::size_t i = 0; i < n_sets; ++i) {
    result.rows[i].set_name = collection.sets[i].name;
    result.rows[i].size = collection.sets[i].members.size();
    result.rows[i].samgs = observed[i];
    result.rows[i].p = p[i];
    result.rows[i].q = q[i];
  }
  std::sort(result.rows.begin(), result.rows.end(),
            [](const ScreenRow& a, const ScreenRow& b) {
              if (a.p != b.p) return a.p < b.p;
              return a.set_name < b.set_name;
            });
  return result;
}

}  // namespace samgsr
