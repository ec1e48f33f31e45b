#include "samgsr/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_set>

#include "samgsr/tsv.hpp"

namespace samgsr {

namespace {

struct Column {
  int subject = -1;
  int time = -1;
};

}  // namespace

LongitudinalMatrix load_expression(const std::string& path,
                                   const std::vector<std::string>& time_order) {
  auto lines = read_lines(path);
  if (lines.empty()) throw io_error("empty expression file: " + path);

  auto header = split(lines[0], '\t');
  if (header.empty() || header[0] != "gene")
    throw io_error("expression header must start with 'gene': " + path);

  LongitudinalMatrix m;
  std::unordered_map<std::string, int> subj_idx;
  std::unordered_map<std::string, int> time_idx;
  std::unordered_set<std::string> seen_columns;

  if (!time_order.empty()) {
    for (const auto& label : time_order) {
      if (time_idx.count(label)) throw io_error("duplicate label in time order: " + label);
      time_idx.emplace(label, static_cast<int>(m.times.size()));
      m.times.push_back({static_cast<int>(m.times.size()), label});
    }
  }

  std::vector<Column> columns;
  for (size_t c = 1; c < header.size(); ++c) {
    const std::string& name = header[c];
    if (!seen_columns.insert(name).second)
      throw io_error("duplicate column header: " + name);
    size_t at = name.find('@');
    if (at == std::string::npos || at == 0 || at + 1 == name.size())
      throw io_error("column header is not <subject>@<time-label>: " + name);
    std::string subject = name.substr(0, at);
    std::string label = name.substr(at + 1);
    Column col;
    auto si = subj_idx.find(subject);
    if (si == subj_idx.end()) {
      col.subject = static_cast<int>(m.subjects.size());
      subj_idx.emplace(subject, col.subject);
      m.subjects.push_back(subject);
    } else {
      col.subject = si->second;
    }
    auto ti = time_idx.find(label);
    if (ti == time_idx.end()) {
      if (!time_order.empty())
        throw io_error("time label '" + label + "' not in the supplied time order");
      col.time = static_cast<int>(m.times.size());
      time_idx.emplace(label, col.time);
      m.times.push_back({col.time, label});
    } else {
      col.time = ti->second;
    }
    columns.push_back(col);
  }
  if (columns.empty()) throw io_error("expression file has no sample columns: " + path);

  std::unordered_set<std::string> seen_genes;
  std::vector<std::vector<std::string>> rows;
  for (size_t r = 1; r < lines.size(); ++r) {
    if (lines[r].empty()) continue;
    auto fields = split(lines[r], '\t');
    if (fields.size() != header.size())
      throw io_error("row " + std::to_string(r + 1) + " has " +
                     std::to_string(fields.size()) + " fields, header has " +
                     std::to_string(header.size()));
    if (!seen_genes.insert(fields[0]).second)
      throw io_error("duplicate gene id: " + fields[0]);
    m.genes.push_back(fields[0]);
    rows.push_back(std::move(fields));
  }
  if (m.genes.empty()) throw io_error("expression file has no gene rows: " + path);

  m.allocate();
  for (size_t g = 0; g < rows.size(); ++g) {
    for (size_t c = 0; c < columns.size(); ++c) {
      const std::string& cell = rows[g][c + 1];
      if (cell.empty()) continue;  // missing
      double v = parse_double(cell, "gene " + m.genes[g] + ", column " + header[c + 1]);
      if (!std::isfinite(v))
        throw io_error("non-finite value for gene " + m.genes[g]);
      m.set(g, columns[c].subject, columns[c].time, v);
    }
  }

  for (size_t s = 0; s < m.n_subjects(); ++s) {
    bool any = false;
    for (size_t g = 0; g < m.n_genes() && !any; ++g)
      for (size_t t = 0; t < m.n_times() && !any; ++t)
        any = m.is_present(g, s, t);
    if (!any) throw io_error("subject has no present values: " + m.subjects[s]);
  }

  m.finalize();
  return m;
}

void write_expression(const LongitudinalMatrix& matrix, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write file: " + path);
  out << "gene";
  for (size_t s = 0; s < matrix.n_subjects(); ++s)
    for (size_t t = 0; t < matrix.n_times(); ++t)
      out << '\t' << matrix.subjects[s] << '@' << matrix.times[t].label;
  out << '\n';
  for (size_t g = 0; g < matrix.n_genes(); ++g) {
    out << matrix.genes[g];
    for (size_t s = 0; s < matrix.n_subjects(); ++s)
      for (size_t t = 0; t < matrix.n_times(); ++t) {
        out << '\t';
        if (matrix.is_present(g, s, t)) out << format_double(matrix.value(g, s, t));
      }
    out << '\n';
  }
  if (!out) throw io_error("write failed: " + path);
}

PhenotypeLabels load_labels(const std::string& path) {
  auto lines = read_lines(path);
  PhenotypeLabels labels;
  for (size_t r = 0; r < lines.size(); ++r) {
    if (lines[r].empty()) continue;
    if (r == 0 && lines[r] == "subject\tclass") continue;  // optional header
    auto fields = split(lines[r], '\t');
    if (fields.size() != 2)
      throw io_error("phenotype line " + std::to_string(r + 1) +
                     " must be subject<TAB>class");
    const std::string& token = fields[1];
    PhenoClass cls;
    if (token == "case" || token == "complicated" || token == "1")
      cls = PhenoClass::Case;
    else if (token == "control" || token == "uncomplicated" || token == "0")
      cls = PhenoClass::Control;
    else
      throw io_error("unknown class token '" + token + "' for subject " + fields[0]);
    if (!labels.by_subject.emplace(fields[0], cls).second)
      throw io_error("subject labeled twice: " + fields[0]);
  }
  if (labels.by_subject.empty()) throw io_error("empty phenotype file: " + path);
  return labels;
}

GeneSetCollection load_gmt(const std::string& path) {
  auto lines = read_lines(path);
  GeneSetCollection collection;
  for (size_t r = 0; r < lines.size(); ++r) {
    if (lines[r].empty()) continue;
    auto fields = split(lines[r], '\t');
    if (fields.size() < 3)
      throw io_error("GMT line " + std::to_string(r + 1) +
                     " has fewer than 3 fields");
    GeneSet set;
    set.name = fields[0];
    set.description = fields[1];
    std::unordered_set<std::string> seen;
    for (size_t i = 2; i < fields.size(); ++i) {
      if (fields[i].empty()) continue;
      if (seen.insert(fields[i]).second) set.members.push_back(fields[i]);
    }
    collection.add(std::move(set));
  }
  if (collection.sets.empty()) throw io_error("empty GMT file: " + path);
  return collection;
}

std::string CoverageReport::to_string() const {
  return std::to_string(genes_annotated) + " of " + std::to_string(genes_in_matrix) +
         " genes annotated; " + std::to_string(sets_kept) + " of " +
         std::to_string(sets_in) + " sets kept";
}

GeneSetCollection restrict_to_matrix(const GeneSetCollection& collection,
                                     const LongitudinalMatrix& matrix,
                                     size_t min_size, CoverageReport* report) {
  if (min_size < 1) throw io_error("min_size must be >= 1");
  GeneSetCollection out;
  std::unordered_set<std::string> annotated;
  for (const auto& set : collection.sets) {
    GeneSet kept;
    kept.name = set.name;
    kept.description = set.description;
    for (const auto& member : set.members)
      if (matrix.gene_index(member) >= 0) {
        kept.members.push_back(member);
        annotated.insert(member);
      }
    if (kept.members.size() >= min_size) out.add(std::move(kept));
  }
  if (report) {
    report->genes_in_matrix = matrix.n_genes();
    report->genes_annotated = annotated.size();
    report->sets_in = collection.sets.size();
    report->sets_kept = out.sets.size();
  }
  if (out.sets.empty())
    throw data_error("no gene set survives restriction to the matrix");
  return out;
}

}  // namespace samgsr
