#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "samgsr/reduction.hpp"
#include "samgsr/types.hpp"

namespace samgsr {

struct CausalTerm {
  std::string gene;
  int time_index = 0;  // 0-based
  double beta = 0.0;
};

// Planted-signal generator. Synthetic mode partitions genes into correlation
// blocks, one causal gene leading each block, and draws
//   X = sqrt(rho) * F_block + sqrt(1 - rho) * E_gene
// where both factors follow an AR(1) path over time. Marginals stay standard
// normal; genes in one block correlate at rho; one gene's time points
// correlate at ar1^|dt|. Resample mode instead draws subjects (with
// replacement) and noise genes from a supplied expression matrix.
struct SimSpec {
  std::vector<CausalTerm> terms;
  std::size_t n_noise_genes = 998;
  std::size_t n_subjects = 100;
  std::size_t n_times = 5;
  std::size_t replicates = 50;
  double rho = 0.4;
  std::size_t block_size = 20;
  double ar1 = 0.5;
  std::uint64_t seed = 0;
  const LongitudinalMatrix* source = nullptr;  // non-null switches to resample
};

struct SimData {
  LongitudinalMatrix matrix;
  PhenotypeLabels labels;
  std::vector<std::uint8_t> classes;  // aligned to matrix.subjects
  GeneSetCollection sets;             // one set per block, plus CAUSAL
};

// P(case) = logistic(sum beta * X). The Bernoulli draw is arranged so that
// negating every beta and swapping the class names is an exact identity, which
// the sign-symmetry property relies on. Cohorts with fewer than 2 subjects in
// either class redraw labels with an incremented sub-seed, up to 100 attempts.
SimData generate(const SimSpec& spec, std::size_t replicate);

// Table-2-style aggregate over replicates.
struct SelectionFrequencyTable {
  std::vector<std::string> time_labels;
  std::vector<double> avg_selected_per_time;  // mean genes selected per time
  double avg_unique_genes = 0.0;
  std::vector<std::string> causal_genes;       // spec order, deduplicated
  std::vector<std::vector<double>> causal_pct;  // gene x time, percent of reps
  std::size_t replicates = 0;
};

enum class Method { Simple, TwoLevel };

// external_sets overrides the generated per-replicate collection (required
// for two-level runs in resample mode, where no block structure exists); it
// is restricted to each replicate's matrix before use.
// out_signatures, when given, receives every replicate's signature.
SelectionFrequencyTable run_benchmark(const SimSpec& spec, Method method,
                                      const PipelineOptions& options,
                                      const GeneSetCollection* external_sets = nullptr,
                                      std::vector<Signature>* out_signatures = nullptr);

// Presets matching the two published simulation settings (times 1-based in
// the source become 0-based indices here).
SimSpec sim1_preset();
SimSpec sim2_preset();

}  // namespace samgsr
