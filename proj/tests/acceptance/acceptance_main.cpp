// Acceptance gate: one PASS/FAIL line per shipped guarantee. Library-level
// guarantees run in process; pipeline-level ones spawn the real binary
// (argv[1]) and inspect its outputs.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "samgsr/dataset.hpp"
#include "samgsr/engine.hpp"
#include "samgsr/metrics.hpp"
#include "samgsr/permutation.hpp"
#include "samgsr/reduction.hpp"
#include "samgsr/rng.hpp"
#include "samgsr/sam.hpp"
#include "samgsr/tsv.hpp"

namespace fs = std::filesystem;
using namespace samgsr;

namespace {

std::string g_bin;
fs::path g_work;
int g_failed = 0;

void verdict(int n, bool ok, const std::string& what, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " " << n << ": " << what;
  if (!detail.empty()) std::cout << " [" << detail << "]";
  std::cout << std::endl;
  if (!ok) ++g_failed;
}

int run_cli(const std::string& args) {
  std::string cmd = g_bin + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

LongitudinalMatrix random_matrix(std::size_t n_genes, std::size_t n_subjects,
                                 std::size_t n_times, std::uint64_t seed) {
  LongitudinalMatrix m;
  for (std::size_t g = 0; g < n_genes; ++g) m.genes.push_back("G" + std::to_string(g));
  for (std::size_t s = 0; s < n_subjects; ++s)
    m.subjects.push_back("S" + std::to_string(s));
  for (std::size_t t = 0; t < n_times; ++t)
    m.times.push_back({static_cast<int>(t), "t" + std::to_string(t)});
  m.allocate();
  SplitMix64 rng(seed);
  for (std::size_t g = 0; g < n_genes; ++g)
    for (std::size_t s = 0; s < n_subjects; ++s)
      for (std::size_t t = 0; t < n_times; ++t) m.set(g, s, t, rng.next_normal());
  m.finalize();
  return m;
}

std::vector<std::uint8_t> half_classes(std::size_t n) {
  std::vector<std::uint8_t> c(n, 1);
  for (std::size_t s = 0; s < n / 2; ++s) c[s] = 0;
  return c;
}

void write_labels(const fs::path& path, const std::vector<std::string>& subjects,
                  const std::vector<std::uint8_t>& classes) {
  std::ofstream out(path);
  for (std::size_t s = 0; s < subjects.size(); ++s)
    out << subjects[s] << '\t' << (classes[s] ? "case" : "control") << '\n';
}

// Independent restatement of the moderated statistic, direct arithmetic.
double brute_force_d(const std::vector<double>& v,
                     const std::vector<std::uint8_t>& cls, double s0) {
  double sum[2] = {0, 0};
  std::size_t n[2] = {0, 0};
  for (std::size_t i = 0; i < v.size(); ++i) {
    sum[cls[i]] += v[i];
    ++n[cls[i]];
  }
  double mean1 = sum[1] / double(n[1]), mean0 = sum[0] / double(n[0]);
  double ss = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double c = v[i] - (cls[i] ? mean1 : mean0);
    ss += c * c;
  }
  double a = (1.0 / double(n[1]) + 1.0 / double(n[0])) / double(n[0] + n[1] - 2);
  return (mean1 - mean0) / (std::sqrt(a * ss) + s0);
}

void criterion_1() {
  auto start = std::chrono::steady_clock::now();
  double hand = sam_statistic({1, 3, 2, 4}, {0, 0, 1, 1}, 0.0);
  bool hand_ok = std::abs(hand - 1.0 / std::sqrt(2.0)) <= 1e-12;
  SplitMix64 rng(20240501);
  double worst = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    std::size_t n1 = 2 + rng.next_below(9), n0 = 2 + rng.next_below(9);
    std::vector<double> v(n1 + n0);
    std::vector<std::uint8_t> cls(n1 + n0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      cls[i] = i >= n0;
      v[i] = rng.next_normal() * 2.5 + (cls[i] ? 0.4 : 0.0);
    }
    double s0 = rng.next_double();
    worst = std::max(worst, std::abs(sam_statistic(v, cls, s0) -
                                     brute_force_d(v, cls, s0)));
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream detail;
  detail << "max |diff| " << worst << ", hand case " << hand << ", " << secs << " s";
  verdict(1, hand_ok && worst <= 1e-12 && secs < 1.0,
          "per-profile statistic matches an independent brute force on 1000 cases",
          detail.str());
}

void criterion_2() {
  SplitMix64 rng(777);
  auto m = random_matrix(40, 18, 4, 31);
  auto classes = half_classes(18);
  auto sam = compute_sam_matrix(m, classes, 0.2);
  double worst = 0;
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<std::uint32_t> cells;
    std::size_t k = 1 + rng.next_below(25);
    for (std::size_t i = 0; i < k; ++i)
      cells.push_back(static_cast<std::uint32_t>(rng.next_below(40 * 4)));
    double manual = 0;
    for (auto c : cells)
      if (sam.usable[c]) manual += sam.d[c] * sam.d[c];
    worst = std::max(worst, std::abs(samgs_statistic(sam, cells) - manual));
  }
  verdict(2, worst <= 1e-12,
          "set scores equal the cell-by-cell recomputed sum over 200 random sets",
          "max |diff| " + format_double(worst));
}

void criterion_3() {
  auto start = std::chrono::steady_clock::now();
  auto m = random_matrix(1000, 40, 5, 602);  // both classes same distribution
  auto classes = half_classes(40);
  GeneSetCollection sets;
  for (int i = 0; i < 200; ++i) {
    GeneSet set;
    set.name = "N" + std::to_string(i);
    for (int j = 0; j < 5; ++j) set.members.push_back(m.genes[i * 5 + j]);
    sets.add(set);
  }
  ScreenOptions opts;
  opts.permutations = 200;
  opts.seed = 7;
  auto result = samgs_screen(m, classes, sets, opts);
  std::size_t hits = 0;
  for (const auto& row : result.rows) hits += row.p <= 0.05;
  double frac = double(hits) / 200.0;
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream detail;
  detail << hits << "/200 null sets at p<=0.05 (" << frac << "), " << secs << " s";
  verdict(3, frac >= 0.02 && frac <= 0.09 && secs < 60.0,
          "null-data screening is calibrated", detail.str());
}

void criterion_4() {
  SplitMix64 seeds(404);
  bool all_ok = true;
  std::string first_bad;
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t n_items = 2 + seeds.next_below(7);
    std::size_t n_subjects = 12 + 2 * seeds.next_below(4);
    auto m = random_matrix(n_items, n_subjects, 1, seeds.next());
    auto classes = half_classes(n_subjects);
    SplitMix64 fx(seeds.next());
    for (std::size_t g = 0; g < n_items; ++g) {
      double shift = 2.5 * fx.next_double();
      for (std::size_t s = n_subjects / 2; s < n_subjects; ++s)
        m.set(g, s, 0, m.value(g, s, 0) + shift);
    }
    auto s0 = resolve_s0(m, classes, 0.1);
    auto sam = compute_sam_matrix(m, classes, 0.1);
    std::vector<std::uint32_t> cells;
    for (std::uint32_t g = 0; g < n_items; ++g) cells.push_back(g);
    auto data = gather_cells(m, cells, s0);
    std::vector<ItemIndex> items;
    for (std::uint32_t i = 0; i < n_items; ++i) items.push_back({{i}});
    std::vector<std::pair<double, std::uint32_t>> ranked;
    for (std::uint32_t g = 0; g < n_items; ++g)
      ranked.push_back({-sam.at(g, 0) * sam.at(g, 0), g});
    std::sort(ranked.begin(), ranked.end());
    std::vector<std::uint32_t> order;
    for (auto& r : ranked) order.push_back(r.second);
    auto plan = make_plan(classes, 99, seeds.next(), 0);
    double cutoff = 0.05 + 0.3 * fx.next_double();
    auto trace = reduce_items(data, plan, items, order, classes, cutoff, false);

    bool prefix = trace.order == order && trace.core_size >= 1 &&
                  trace.core_size <= n_items &&
                  trace.residual_p.size() == n_items - 1;
    bool least_k = true;
    for (std::size_t k = 1; k < trace.core_size && least_k; ++k)
      least_k = trace.residual_p[k - 1] <= cutoff;
    if (trace.core_size < n_items)
      least_k = least_k && trace.residual_p[trace.core_size - 1] > cutoff;
    if (!(prefix && least_k) && all_ok) {
      all_ok = false;
      first_bad = "rep " + std::to_string(rep);
    }
  }

  // the same rule must hold in the emitted trace file
  fs::path dir = g_work / "trace_check";
  fs::create_directories(dir);
  auto m = random_matrix(6, 16, 3, 19);
  for (std::size_t g = 0; g < 2; ++g)
    for (std::size_t s = 8; s < 16; ++s)
      for (std::size_t t = 0; t < 2; ++t) m.set(g, s, t, m.value(g, s, t) + 2.0);
  write_expression(m, (dir / "expr.tsv").string());
  write_labels(dir / "labels.tsv", m.subjects, half_classes(16));
  bool file_ok =
      run_cli("--out " + dir.string() + " simple --expr " + (dir / "expr.tsv").string() +
              " --labels " + (dir / "labels.tsv").string() +
              " --permutations 200 --seed 3 --emit-trace") == 0;
  if (file_ok) {
    std::ifstream in(dir / "trace.tsv");
    std::string line;
    std::getline(in, line);  // header
    std::map<std::string, std::vector<std::pair<std::size_t, double>>> units;
    std::map<std::string, std::size_t> chosen;
    while (std::getline(in, line)) {
      auto f = split(line, '\t');
      if (f.size() != 7) { file_ok = false; break; }
      chosen[f[0]] = std::stoul(f[3]);
      if (!f[6].empty())
        units[f[0]].push_back({std::stoul(f[4]), parse_double(f[6], "c_k")});
    }
    for (const auto& [unit, rows] : units) {
      std::size_t k_star = chosen[unit];
      for (const auto& [rank, ck] : rows) {
        if (rank < k_star && ck > 0.05) file_ok = false;
        if (rank == k_star && rows.size() + 1 > k_star && ck <= 0.05) file_ok = false;
      }
    }
  }
  verdict(4, all_ok && file_ok,
          "100 randomized reductions obey the prefix and least-k stopping rule",
          all_ok ? (file_ok ? "in-memory and emitted traces agree" : "trace file check failed")
                 : first_bad);
}

struct SelectionTableText {
  std::vector<std::string> time_labels;
  std::map<std::string, std::vector<double>> pct;  // causal gene -> per-time %
  double unique_avg = 0.0;
};

SelectionTableText read_selection(const fs::path& path) {
  SelectionTableText t;
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  auto header = split(line, '\t');
  for (std::size_t i = 1; i + 1 < header.size(); ++i)
    t.time_labels.push_back(header[i]);
  while (std::getline(in, line)) {
    auto f = split(line, '\t');
    if (f.empty()) continue;
    if (f[0] == "avg_selected") {
      t.unique_avg = parse_double(f.back(), "unique_avg");
    } else if (f[0].size() > 4 && f[0].substr(f[0].size() - 4) == "_pct") {
      std::vector<double> row;
      for (std::size_t i = 1; i <= t.time_labels.size(); ++i)
        row.push_back(parse_double(f[i], "pct"));
      t.pct[f[0].substr(0, f[0].size() - 4)] = row;
    }
  }
  return t;
}

void criterion_5() {
  // Planted-signal recovery. Time decorrelation (ar1 0) would starve the
  // distributed-effect gene of its aggregated significance, while the default
  // profile (ar1 0.5) leaks the point-effect gene's signal into neighboring
  // time points; 0.45 keeps both planted structures recoverable. rho, subject
  // count, replicate count, and permutation depth are pinned.
  fs::path dir = g_work / "recovery";
  fs::create_directories(dir);
  int rc = run_cli("--out " + dir.string() +
                   " simulate --preset sim1 --method simple --rho 0 --ar1 0.45"
                   " --subjects 100 --replicates 50 --permutations 500 --seed 2");
  if (rc != 0) {
    verdict(5, false, "planted-signal recovery run failed", "exit " + std::to_string(rc));
    return;
  }
  auto table = read_selection(dir / "selection.tsv");
  double f13a1_t2 = table.pct.at("F13A1")[1];
  double worst_off = 0;
  for (std::size_t t = 0; t < 5; ++t)
    if (t != 2) worst_off = std::max(worst_off, table.pct.at("GSTM1")[t]);
  std::ostringstream detail;
  detail << "distributed-effect gene at its strongest time " << f13a1_t2
         << "% (need >= 80), point-effect gene off target max " << worst_off
         << "% (need <= 30)";
  verdict(5, f13a1_t2 >= 80.0 && worst_off <= 30.0,
          "planted signals are recovered at their causal time points", detail.str());
}

void criterion_6() {
  fs::path lo = g_work / "inflate_lo";
  fs::path hi = g_work / "inflate_hi";
  fs::create_directories(lo);
  fs::create_directories(hi);
  std::string common =
      " simulate --preset sim2 --method simple --subjects 100 --replicates 50"
      " --permutations 500 --seed 2 --rho ";
  bool ran = run_cli("--out " + lo.string() + common + "0") == 0 &&
             run_cli("--out " + hi.string() + common + "0.8") == 0;
  if (!ran) {
    verdict(6, false, "correlation-inflation runs failed", "");
    return;
  }
  double lo_avg = read_selection(lo / "selection.tsv").unique_avg;
  double hi_avg = read_selection(hi / "selection.tsv").unique_avg;
  std::ostringstream detail;
  detail << "average selected genes " << lo_avg << " at rho 0 vs " << hi_avg
         << " at rho 0.8";
  verdict(6, hi_avg > lo_avg,
          "raising noise block correlation strictly inflates the selected count",
          detail.str());
}

void criterion_7() {
  std::vector<std::uint8_t> y{0, 0, 1, 1};
  std::vector<double> perfect{0.0, 0.0, 1.0, 1.0};
  std::vector<double> flat(4, 0.5);
  bool boundaries = metric_error(perfect, y) == 0.0 && metric_gbs(perfect, y) == 0.0 &&
                    metric_bcm(perfect, y) == 1.0 && metric_aupr(perfect, y) == 1.0 &&
                    metric_gbs(flat, y) == 0.25 && metric_bcm(flat, y) == 0.5;
  SplitMix64 rng(1001);
  const std::size_t n = 200;
  const double prevalence = 0.35;
  double total = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> p(n);
    std::vector<std::uint8_t> t(n);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = rng.next_double();
      t[i] = rng.next_double() < prevalence;
      pos += t[i];
    }
    if (pos == 0) t[0] = 1;
    total += metric_aupr(p, t);
  }
  double mc = total / 1000.0;
  std::ostringstream detail;
  detail << "Monte-Carlo random-score area " << mc << " vs prevalence " << prevalence;
  verdict(7, boundaries && std::abs(mc - prevalence) <= 0.05,
          "metric boundaries and the random-score baseline hold", detail.str());
}

bool dirs_match(const fs::path& a, const fs::path& b, std::string* why) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(a)) {
    auto name = entry.path().filename().string();
    if (name != "manifest.json") names.push_back(name);
  }
  std::sort(names.begin(), names.end());
  for (const auto& name : names) {
    if (!fs::exists(b / name)) {
      *why = name + " missing";
      return false;
    }
    if (slurp(a / name) != slurp(b / name)) {
      *why = name + " differs";
      return false;
    }
  }
  std::size_t b_count = 0;
  for (const auto& entry : fs::directory_iterator(b))
    if (entry.path().filename() != "manifest.json") ++b_count;
  if (b_count != names.size()) {
    *why = "file counts differ";
    return false;
  }
  return true;
}

void criterion_8() {
  fs::path base = g_work / "determinism";
  fs::create_directories(base);
  auto m = random_matrix(24, 20, 3, 314);
  auto classes = half_classes(20);
  for (std::size_t g = 0; g < 4; ++g)
    for (std::size_t s = 10; s < 20; ++s)
      for (std::size_t t = 0; t < 2; ++t) m.set(g, s, t, m.value(g, s, t) + 2.0);
  write_expression(m, (base / "expr.tsv").string());
  write_labels(base / "labels.tsv", m.subjects, classes);
  {
    std::ofstream gmt(base / "sets.gmt");
    gmt << "HOT\tplanted\tG0\tG1\tG2\tG3\n";
    for (int b = 0; b < 5; ++b) {
      gmt << "BG" << b << "\tnoise";
      for (int j = 0; j < 4; ++j) gmt << "\tG" << (4 + b * 4 + j);
      gmt << "\n";
    }
  }
  // separable cohort reused for the evaluate leg
  auto sep = random_matrix(2, 24, 2, 55);
  for (std::size_t s = 0; s < 24; ++s)
    for (std::size_t t = 0; t < 2; ++t) {
      sep.set(0, s, t, sep.value(0, s, t) * 0.2 + (s >= 12 ? 6.0 : 0.0));
      sep.set(1, s, t, sep.value(1, s, t) * 0.2 + (s >= 12 ? -4.0 : 2.0));
    }
  write_expression(sep, (base / "sep.tsv").string());
  write_labels(base / "sep_labels.tsv", sep.subjects, half_classes(24));
  {
    std::ofstream sig(base / "sig.tsv");
    sig << "gene\ttime_label\td\tstage\nG0\tt0\t3\tself\nG0\tt1\t3\tself\n"
        << "G1\tt0\t-2\tself\nG1\tt1\t-2\tself\n";
  }

  std::string in_args = " --expr " + (base / "expr.tsv").string() + " --labels " +
                        (base / "labels.tsv").string();
  std::string gmt_arg = " --gmt " + (base / "sets.gmt").string();
  std::vector<std::pair<std::string, std::string>> legs = {
      {"screen", "screen" + in_args + gmt_arg + " --permutations 150 --seed 9"},
      {"simple", "simple" + in_args + " --permutations 150 --seed 9 --emit-trace"},
      {"two-level", "two-level" + in_args + gmt_arg + " --permutations 150 --seed 9 --emit-trace"},
      {"evaluate", "evaluate --signature " + (base / "sig.tsv").string() +
                       " --train-expr " + (base / "sep.tsv").string() +
                       " --train-labels " + (base / "sep_labels.tsv").string() +
                       " --test-expr " + (base / "sep.tsv").string() +
                       " --test-labels " + (base / "sep_labels.tsv").string()},
      {"simulate",
       "simulate --preset sim1 --replicates 3 --subjects 24 --noise-genes 18"
       " --block-size 5"
       " --permutations 80 --seed 9 --emit-signatures"},
  };
  bool all_ok = true;
  std::string why, bad_leg;
  for (const auto& [name, args] : legs) {
    fs::path d1 = base / (name + "_a");
    fs::path d2 = base / (name + "_b");
    fs::path d8 = base / (name + "_t8");
    for (const auto& d : {d1, d2, d8}) {
      fs::remove_all(d);
      fs::create_directories(d);
    }
    if (run_cli("--out " + d1.string() + " --threads 1 " + args) != 0 ||
        run_cli("--out " + d2.string() + " --threads 1 " + args) != 0 ||
        run_cli("--out " + d8.string() + " --threads 8 " + args) != 0) {
      all_ok = false;
      bad_leg = name;
      why = "run failed";
      break;
    }
    if (!dirs_match(d1, d2, &why) || !dirs_match(d1, d8, &why)) {
      all_ok = false;
      bad_leg = name;
      break;
    }
  }
  if (all_ok) {
    // report leg: consumes the simple leg's signature
    fs::path r1 = base / "report_a", r2 = base / "report_b", r8 = base / "report_t8";
    for (const auto& d : {r1, r2, r8}) {
      fs::remove_all(d);
      fs::create_directories(d);
    }
    std::string rargs = "report --signature " +
                        (base / "simple_a" / "signature.tsv").string() + in_args;
    if (run_cli("--out " + r1.string() + " --threads 1 " + rargs) != 0 ||
        run_cli("--out " + r2.string() + " --threads 1 " + rargs) != 0 ||
        run_cli("--out " + r8.string() + " --threads 8 " + rargs) != 0 ||
        !dirs_match(r1, r2, &why) || !dirs_match(r1, r8, &why)) {
      all_ok = false;
      bad_leg = "report";
    }
  }
  verdict(8, all_ok,
          "all six subcommands are byte-deterministic across reruns and thread counts",
          all_ok ? "" : bad_leg + ": " + why);
}

void criterion_9() {
  // Separable cohort large enough that the calibrated posteriors can reach
  // their pinned bands: with 40 cases the calibration targets are 41/42.
  fs::path dir = g_work / "separable";
  fs::create_directories(dir);
  SplitMix64 rng(808);
  auto make_sep = [&](std::size_t n_per_class, std::uint64_t seed) {
    auto m = random_matrix(2, 2 * n_per_class, 2, seed);
    for (std::size_t s = 0; s < 2 * n_per_class; ++s)
      for (std::size_t t = 0; t < 2; ++t) {
        bool case_side = s >= n_per_class;
        m.set(0, s, t, m.value(0, s, t) * 0.1 + (case_side ? 8.0 : 0.0));
        m.set(1, s, t, m.value(1, s, t) * 0.1 + (case_side ? -5.0 : 3.0));
      }
    return m;
  };
  auto train = make_sep(40, rng.next());
  auto test = make_sep(15, rng.next());
  // distinct subject ids for the test cohort
  for (std::size_t s = 0; s < test.n_subjects(); ++s) test.subjects[s] = "U" + std::to_string(s);
  test.finalize();
  write_expression(train, (dir / "train.tsv").string());
  write_labels(dir / "train_labels.tsv", train.subjects, half_classes(80));
  write_expression(test, (dir / "test.tsv").string());
  write_labels(dir / "test_labels.tsv", test.subjects, half_classes(30));
  {
    std::ofstream sig(dir / "sig.tsv");
    sig << "gene\ttime_label\td\tstage\nG0\tt0\t4\tself\nG0\tt1\t4\tself\n"
        << "G1\tt0\t-3\tself\nG1\tt1\t-3\tself\n";
  }
  int rc = run_cli("--out " + dir.string() + " evaluate --signature " +
                   (dir / "sig.tsv").string() + " --train-expr " +
                   (dir / "train.tsv").string() + " --train-labels " +
                   (dir / "train_labels.tsv").string() + " --test-expr " +
                   (dir / "test.tsv").string() + " --test-labels " +
                   (dir / "test_labels.tsv").string());
  if (rc != 0) {
    verdict(9, false, "separable evaluation run failed", "exit " + std::to_string(rc));
    return;
  }
  std::ifstream in(dir / "metrics.tsv");
  std::string line;
  std::getline(in, line);
  auto header = split(line, '\t');
  std::map<std::string, std::vector<double>> rows;
  while (std::getline(in, line)) {
    auto f = split(line, '\t');
    std::vector<double> vals;
    for (std::size_t i = 1; i < f.size(); ++i)
      vals.push_back(parse_double(f[i], "metrics"));
    rows[f[0]] = vals;
  }
  // columns: train:t0 train:t1 test:t0 test:t1
  bool ok = true;
  std::ostringstream detail;
  for (std::size_t c = 0; c < 4 && ok; ++c) {
    double err = rows.at("error_pct")[c];
    double gbs = rows.at("gbs")[c];
    double bcm = rows.at("bcm")[c];
    double aupr = rows.at("aupr")[c];
    // calibrated posteriors cannot reach exactly 0/1 on finite data; the GBS
    // and BCM bands below are the pinned acceptance tolerances
    ok = err == 0.0 && aupr == 1.0 && gbs <= 0.05 && bcm >= 0.95;
    if (c == 0)
      detail << "train t0: error " << err << "%, gbs " << gbs << ", bcm " << bcm
             << ", aupr " << aupr;
    if (!ok) detail << "; column " << header[c + 1] << " out of band";
  }
  verdict(9, ok,
          "the separable cohort hits zero error and boundary-band metrics everywhere",
          detail.str());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance_tests <samgsr-binary>\n";
    return 2;
  }
  g_bin = argv[1];
  g_work = fs::temp_directory_path() / "samgsr_acceptance";
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();

  if (g_failed == 0) {
    std::cout << "ALL 9 ACCEPTANCE CHECKS PASSED" << std::endl;
    return 0;
  }
  std::cout << g_failed << " ACCEPTANCE CHECK(S) FAILED" << std::endl;
  return 1;
}
