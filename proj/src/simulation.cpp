#include "samgsr/simulation.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <unordered_map>
#include <unordered_set>

#include "samgsr/dataset.hpp"
#include "samgsr/errors.hpp"
#include "samgsr/rng.hpp"

namespace samgsr {

namespace {

// Substream tags; every random decision is keyed on
// (seed, replicate + 1, tag, entity...) so no draw depends on loop order.
constexpr std::uint64_t kStreamBlock = 1;
constexpr std::uint64_t kStreamGene = 2;
constexpr std::uint64_t kStreamLabel = 3;
constexpr std::uint64_t kStreamResample = 4;

void ar1_path(SplitMix64& rng, double phi, double* z, std::size_t n) {
  double carry = std::sqrt(1.0 - phi * phi);
  z[0] = rng.next_normal();
  for (std::size_t t = 1; t < n; ++t)
    z[t] = phi * z[t - 1] + carry * rng.next_normal();
}

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

void validate(const SimSpec& spec) {
  if (spec.n_subjects < 4) throw data_error("need at least 4 subjects");
  if (spec.n_times < 1) throw data_error("need at least 1 time point");
  if (spec.replicates < 1) throw data_error("need at least 1 replicate");
  if (!(spec.rho >= 0.0 && spec.rho < 1.0))
    throw data_error("rho must lie in [0, 1)");
  if (!(spec.ar1 >= 0.0 && spec.ar1 < 1.0))
    throw data_error("ar1 must lie in [0, 1)");
  if (spec.block_size < 1) throw data_error("block_size must be >= 1");
  for (const auto& term : spec.terms) {
    if (!std::isfinite(term.beta)) throw data_error("non-finite coefficient");
    if (term.time_index < 0 || term.time_index >= static_cast<int>(spec.n_times))
      throw data_error("coefficient time index out of range for gene " + term.gene);
  }
}

std::vector<std::string> causal_gene_names(const SimSpec& spec) {
  std::vector<std::string> names;
  for (const auto& term : spec.terms)
    if (std::find(names.begin(), names.end(), term.gene) == names.end())
      names.push_back(term.gene);
  return names;
}

// Labels drawn against |logit| so that negating every beta and swapping the
// class names is exactly the identity on the result.
std::vector<std::uint8_t> draw_labels(const std::vector<double>& logits,
                                      const SimSpec& spec, std::size_t replicate) {
  std::size_t S = logits.size();
  std::vector<std::uint8_t> classes(S);
  for (std::size_t attempt = 0; attempt < 100; ++attempt) {
    std::size_t n_case = 0;
    for (std::size_t s = 0; s < S; ++s) {
      SplitMix64 rng(mix_streams(spec.seed, replicate + 1, kStreamLabel, attempt,
                                 static_cast<std::uint64_t>(s)));
      bool hi = rng.next_double() < logistic(std::abs(logits[s]));
      bool is_case = logits[s] < 0.0 ? !hi : hi;
      classes[s] = is_case ? 1 : 0;
      n_case += classes[s];
    }
    if (n_case >= 2 && S - n_case >= 2) return classes;
  }
  throw data_error("label draw kept landing in one class; check coefficients");
}

SimData generate_synthetic(const SimSpec& spec, std::size_t replicate) {
  auto causal = causal_gene_names(spec);
  std::size_t n_genes = causal.size() + spec.n_noise_genes;
  std::size_t n_blocks = (n_genes + spec.block_size - 1) / spec.block_size;
  if (causal.size() > n_blocks)
    throw data_error("more causal genes than correlation blocks");

  SimData out;
  auto& m = out.matrix;
  std::size_t T = spec.n_times;
  std::size_t S = spec.n_subjects;

  // Gene order: block b leads with causal gene b (while they last), then
  // noise genes fill the remainder.
  std::vector<std::size_t> block_of(n_genes);
  std::size_t noise_counter = 0;
  for (std::size_t b = 0; b < n_blocks; ++b) {
    std::size_t lo = b * spec.block_size;
    std::size_t hi = std::min(n_genes, lo + spec.block_size);
    for (std::size_t g = lo; g < hi; ++g) {
      block_of[g] = b;
      if (g == lo && b < causal.size()) {
        m.genes.push_back(causal[b]);
      } else {
        char name[32];
        std::snprintf(name, sizeof name, "NOISE%05zu", ++noise_counter);
        m.genes.push_back(name);
      }
    }
  }
  for (std::size_t s = 0; s < S; ++s) {
    char name[32];
    std::snprintf(name, sizeof name, "S%04zu", s + 1);
    m.subjects.push_back(name);
  }
  for (std::size_t t = 0; t < T; ++t)
    m.times.push_back({static_cast<int>(t), "t" + std::to_string(t + 1)});
  m.allocate();

  double wb = std::sqrt(spec.rho);
  double wg = std::sqrt(1.0 - spec.rho);
  std::vector<double> fpath(T), epath(T);
#pragma omp parallel for schedule(static) private(fpath, epath)
  for (long long ss = 0; ss < static_cast<long long>(S); ++ss) {
    std::size_t s = static_cast<std::size_t>(ss);
    fpath.resize(T);
    epath.resize(T);
    std::vector<double> block_path(n_blocks * T);
    for (std::size_t b = 0; b < n_blocks; ++b) {
      SplitMix64 rng(mix_streams(spec.seed, replicate + 1, kStreamBlock, b,
                                 static_cast<std::uint64_t>(s)));
      ar1_path(rng, spec.ar1, block_path.data() + b * T, T);
    }
    for (std::size_t g = 0; g < n_genes; ++g) {
      SplitMix64 rng(mix_streams(spec.seed, replicate + 1, kStreamGene, g,
                                 static_cast<std::uint64_t>(s)));
      ar1_path(rng, spec.ar1, epath.data(), T);
      const double* f = block_path.data() + block_of[g] * T;
      for (std::size_t t = 0; t < T; ++t)
        m.set(g, s, t, wb * f[t] + wg * epath[t]);
    }
  }
  m.finalize();

  std::vector<double> logits(S, 0.0);
  for (const auto& term : spec.terms) {
    int g = m.gene_index(term.gene);
    for (std::size_t s = 0; s < S; ++s)
      logits[s] += term.beta * m.value(g, s, term.time_index);
  }
  out.classes = draw_labels(logits, spec, replicate);
  for (std::size_t s = 0; s < S; ++s)
    out.labels.by_subject.emplace(
        m.subjects[s], out.classes[s] ? PhenoClass::Case : PhenoClass::Control);

  for (std::size_t b = 0; b < n_blocks; ++b) {
    GeneSet set;
    char name[32];
    std::snprintf(name, sizeof name, "BLOCK%04zu", b + 1);
    set.name = name;
    std::size_t lo = b * spec.block_size;
    std::size_t hi = std::min(n_genes, lo + spec.block_size);
    for (std::size_t g = lo; g < hi; ++g) set.members.push_back(m.genes[g]);
    out.sets.add(std::move(set));
  }
  if (!causal.empty()) {
    GeneSet set;
    set.name = "CAUSAL";
    set.members = causal;
    out.sets.add(std::move(set));
  }
  return out;
}

SimData generate_resample(const SimSpec& spec, std::size_t replicate) {
  const LongitudinalMatrix& src = *spec.source;
  auto causal = causal_gene_names(spec);
  for (const auto& gene : causal)
    if (src.gene_index(gene) < 0)
      throw data_error("causal gene not in expression source: " + gene);
  if (spec.n_times != src.n_times())
    throw data_error("spec time count differs from the expression source");

  SplitMix64 rng(mix_streams(spec.seed, replicate + 1, kStreamResample));

  // Noise genes: a uniform draw of non-causal source rows, kept in source
  // order. Subjects: drawn with replacement.
  std::unordered_set<std::string> causal_set(causal.begin(), causal.end());
  std::vector<std::size_t> pool;
  for (std::size_t g = 0; g < src.n_genes(); ++g)
    if (!causal_set.count(src.genes[g])) pool.push_back(g);
  if (pool.size() < spec.n_noise_genes)
    throw data_error("expression source has too few genes to resample");
  shuffle(pool.data(), pool.size(), rng);
  std::vector<std::size_t> picked(pool.begin(), pool.begin() + spec.n_noise_genes);
  std::sort(picked.begin(), picked.end());

  std::vector<std::size_t> subject_draw(spec.n_subjects);
  for (auto& s : subject_draw) s = rng.next_below(src.n_subjects());

  SimData out;
  auto& m = out.matrix;
  std::vector<std::size_t> src_gene;
  for (const auto& gene : causal) {
    m.genes.push_back(gene);
    src_gene.push_back(static_cast<std::size_t>(src.gene_index(gene)));
  }
  for (std::size_t g : picked) {
    m.genes.push_back(src.genes[g]);
    src_gene.push_back(g);
  }
  for (std::size_t s = 0; s < spec.n_subjects; ++s) {
    char name[32];
    std::snprintf(name, sizeof name, "S%04zu", s + 1);
    m.subjects.push_back(name);
  }
  m.times = src.times;
  m.allocate();
  for (std::size_t g = 0; g < m.genes.size(); ++g)
    for (std::size_t s = 0; s < spec.n_subjects; ++s)
      for (std::size_t t = 0; t < src.n_times(); ++t)
        if (src.is_present(src_gene[g], subject_draw[s], t))
          m.set(g, s, t, src.value(src_gene[g], subject_draw[s], t));
  m.finalize();

  // Missing causal cells contribute nothing to the logit.
  std::vector<double> logits(spec.n_subjects, 0.0);
  for (const auto& term : spec.terms) {
    int g = m.gene_index(term.gene);
    for (std::size_t s = 0; s < spec.n_subjects; ++s)
      if (m.is_present(g, s, term.time_index))
        logits[s] += term.beta * m.value(g, s, term.time_index);
  }
  out.classes = draw_labels(logits, spec, replicate);
  for (std::size_t s = 0; s < spec.n_subjects; ++s)
    out.labels.by_subject.emplace(
        m.subjects[s], out.classes[s] ? PhenoClass::Case : PhenoClass::Control);

  if (!causal.empty()) {
    GeneSet set;
    set.name = "CAUSAL";
    set.members = causal;
    out.sets.add(std::move(set));
  }
  return out;
}

}  // namespace

SimData generate(const SimSpec& spec, std::size_t replicate) {
  validate(spec);
  return spec.source ? generate_resample(spec, replicate)
                     : generate_synthetic(spec, replicate);
}

SelectionFrequencyTable run_benchmark(const SimSpec& spec, Method method,
                                      const PipelineOptions& options,
                                      const GeneSetCollection* external_sets,
                                      std::vector<Signature>* out_signatures) {
  validate(spec);
  auto causal = causal_gene_names(spec);

  SelectionFrequencyTable table;
  table.replicates = spec.replicates;
  table.causal_genes = causal;
  for (std::size_t t = 0; t < spec.n_times; ++t)
    table.time_labels.push_back("t" + std::to_string(t + 1));
  table.avg_selected_per_time.assign(spec.n_times, 0.0);
  table.causal_pct.assign(causal.size(),
                          std::vector<double>(spec.n_times, 0.0));

  std::vector<Signature> signatures(spec.replicates);
  std::vector<std::exception_ptr> failures(spec.replicates);
#pragma omp parallel for schedule(dynamic)
  for (long long r = 0; r < static_cast<long long>(spec.replicates); ++r) {
    try {
      SimData data = generate(spec, static_cast<std::size_t>(r));
      PipelineOptions opts = options;
      opts.screen.seed =
          mix_streams(options.screen.seed, static_cast<std::uint64_t>(r) + 1);
      opts.screen.parallel = false;
      PipelineResult result;
      if (method == Method::Simple) {
        result = simple_samgsr(data.matrix, data.classes, opts);
      } else {
        GeneSetCollection sets =
            external_sets ? restrict_to_matrix(*external_sets, data.matrix, 1)
                          : std::move(data.sets);
        result = two_level_samgsr(data.matrix, data.classes, sets, opts);
      }
      signatures[r] = std::move(result.signature);
    } catch (...) {
      failures[r] = std::current_exception();
    }
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);

  // Resample mode may carry arbitrary source time labels; prefer them.
  if (spec.source)
    for (std::size_t t = 0; t < spec.n_times; ++t)
      table.time_labels[t] = spec.source->times[t].label;

  std::unordered_map<std::string, std::size_t> causal_pos;
  for (std::size_t i = 0; i < causal.size(); ++i) causal_pos.emplace(causal[i], i);

  double unique_total = 0.0;
  for (const auto& sig : signatures) {
    unique_total += static_cast<double>(sig.unique_genes().size());
    for (const auto& e : sig.entries) {
      table.avg_selected_per_time[e.time_index] += 1.0;
      auto it = causal_pos.find(e.gene);
      if (it != causal_pos.end())
        table.causal_pct[it->second][e.time_index] += 1.0;
    }
  }
  double reps = static_cast<double>(spec.replicates);
  for (auto& v : table.avg_selected_per_time) v /= reps;
  for (auto& row : table.causal_pct)
    for (auto& v : row) v = 100.0 * v / reps;
  table.avg_unique_genes = unique_total / reps;
  if (out_signatures) *out_signatures = std::move(signatures);
  return table;
}

SimSpec sim1_preset() {
  SimSpec spec;
  spec.terms = {{"F13A1", 0, 0.18},
                {"F13A1", 1, 0.57},
                {"F13A1", 2, 0.29},
                {"F13A1", 3, 0.41},
                {"GSTM1", 2, 1.02}};
  return spec;
}

SimSpec sim2_preset() {
  SimSpec spec;
  spec.terms = {{"COX4I2", 0, 0.56}, {"RP9", 4, -0.91}};
  return spec;
}

}  // namespace samgsr
