#include "samgsr/types.hpp"

namespace samgsr {

int LongitudinalMatrix::gene_index(const std::string& id) const {
  auto it = gene_idx_.find(id);
  return it == gene_idx_.end() ? -1 : it->second;
}

int LongitudinalMatrix::subject_index(const std::string& id) const {
  auto it = subject_idx_.find(id);
  return it == subject_idx_.end() ? -1 : it->second;
}

int LongitudinalMatrix::time_index(const std::string& label) const {
  auto it = time_idx_.find(label);
  return it == time_idx_.end() ? -1 : it->second;
}

void LongitudinalMatrix::allocate() {
  size_t n = genes.size() * subjects.size() * times.size();
  values.assign(n, 0.0);
  present.assign(n, 0);
}

void LongitudinalMatrix::finalize() {
  size_t n = genes.size() * subjects.size() * times.size();
  if (values.size() != n || present.size() != n)
    throw io_error("matrix storage does not match its index lists");
  gene_idx_.clear();
  subject_idx_.clear();
  time_idx_.clear();
  for (size_t i = 0; i < genes.size(); ++i) {
    if (!gene_idx_.emplace(genes[i], static_cast<int>(i)).second)
      throw io_error("duplicate gene id: " + genes[i]);
  }
  for (size_t i = 0; i < subjects.size(); ++i) {
    if (!subject_idx_.emplace(subjects[i], static_cast<int>(i)).second)
      throw io_error("duplicate subject id: " + subjects[i]);
  }
  for (size_t i = 0; i < times.size(); ++i) {
    if (times[i].index != static_cast<int>(i))
      throw io_error("time point indices must be contiguous from 0");
    if (!time_idx_.emplace(times[i].label, static_cast<int>(i)).second)
      throw io_error("duplicate time label: " + times[i].label);
  }
}

std::vector<uint8_t> compile_labels(const PhenotypeLabels& labels,
                                    const LongitudinalMatrix& matrix) {
  std::vector<uint8_t> out(matrix.n_subjects(), 0);
  size_t n_case = 0, n_control = 0;
  for (size_t s = 0; s < matrix.n_subjects(); ++s) {
    auto it = labels.by_subject.find(matrix.subjects[s]);
    if (it == labels.by_subject.end())
      throw io_error("subject not in phenotype file: " + matrix.subjects[s]);
    out[s] = it->second == PhenoClass::Case ? 1 : 0;
    (out[s] ? n_case : n_control) += 1;
  }
  if (n_case == 0 || n_control == 0)
    throw data_error("both classes required: cohort has a single phenotype class");
  return out;
}

int GeneSetCollection::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

void GeneSetCollection::add(GeneSet set) {
  if (set.members.empty()) throw io_error("gene set with no members: " + set.name);
  if (index_.count(set.name)) throw io_error("duplicate gene set name: " + set.name);
  index_.emplace(set.name, static_cast<int>(sets.size()));
  sets.push_back(std::move(set));
}

}  // namespace samgsr
