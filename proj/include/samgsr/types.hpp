#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "samgsr/errors.hpp"

namespace samgsr {

enum class PhenoClass : uint8_t { Control = 0, Case = 1 };

struct TimePoint {
  int index = 0;          // contiguous 0..T-1
  std::string label;      // e.g. "day0.5"; unique within a matrix
};

// Longitudinal expression: genes x subjects x time points of log2 expression
// plus a presence mask.  Values are stored flat with time fastest, and the
// structure is immutable once finalize() has run; workers share it read-only.
class LongitudinalMatrix {
 public:
  std::vector<std::string> genes;
  std::vector<std::string> subjects;
  std::vector<TimePoint> times;
  std::vector<double> values;    // size G*S*T
  std::vector<uint8_t> present;  // same shape; 0 = missing

  size_t n_genes() const { return genes.size(); }
  size_t n_subjects() const { return subjects.size(); }
  size_t n_times() const { return times.size(); }

  size_t flat(size_t g, size_t s, size_t t) const {
    return (g * subjects.size() + s) * times.size() + t;
  }
  double value(size_t g, size_t s, size_t t) const { return values[flat(g, s, t)]; }
  bool is_present(size_t g, size_t s, size_t t) const { return present[flat(g, s, t)] != 0; }
  void set(size_t g, size_t s, size_t t, double v) {
    size_t i = flat(g, s, t);
    values[i] = v;
    present[i] = 1;
  }
  void set_missing(size_t g, size_t s, size_t t) {
    size_t i = flat(g, s, t);
    values[i] = 0.0;
    present[i] = 0;
  }

  // -1 when absent
  int gene_index(const std::string& id) const;
  int subject_index(const std::string& id) const;
  int time_index(const std::string& label) const;

  // Allocates value/present storage (all-missing) from the id lists.
  void allocate();
  // Builds lookup maps and checks shape/uniqueness invariants.
  void finalize();

 private:
  std::unordered_map<std::string, int> gene_idx_;
  std::unordered_map<std::string, int> subject_idx_;
  std::unordered_map<std::string, int> time_idx_;
};

struct PhenotypeLabels {
  std::unordered_map<std::string, PhenoClass> by_subject;
};

// Aligns labels with matrix.subjects.  Throws io_error if a matrix subject is
// unlabeled and data_error unless both classes are present.
std::vector<uint8_t> compile_labels(const PhenotypeLabels& labels,
                                    const LongitudinalMatrix& matrix);

struct GeneSet {
  std::string name;
  std::string description;
  std::vector<std::string> members;  // deduplicated, input order
};

class GeneSetCollection {
 public:
  std::vector<GeneSet> sets;  // file order

  int find(const std::string& name) const;
  void add(GeneSet set);  // throws io_error on duplicate name or empty members
  size_t size() const { return sets.size(); }

 private:
  std::unordered_map<std::string, int> index_;
};

}  // namespace samgsr
