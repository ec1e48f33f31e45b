// samgsr: longitudinal two-class feature selection over gene sets.
// Exit codes: 0 success, 2 input/usage error, 3 degenerate data, 4 internal.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "samgsr/classifier.hpp"
#include "samgsr/dataset.hpp"
#include "samgsr/errors.hpp"
#include "samgsr/report.hpp"
#include "samgsr/simulation.hpp"
#include "samgsr/tsv.hpp"

namespace {

using nlohmann::json;
using namespace samgsr;

constexpr const char* kVersion = "1.0.0";
constexpr int kFormatVersion = 1;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

// Shared plumbing every subcommand fills in while it runs.
struct Run {
  std::string subcommand;
  std::string out_dir = ".";
  bool dry_run = false;
  json config = json::object();
  json inputs = json::object();
  json counts = json::object();
  json timings = json::object();
  std::vector<std::string> warnings;

  std::string path(const std::string& name) const {
    return (std::filesystem::path(out_dir) / name).string();
  }
  void input(const std::string& role, const std::string& file) {
    inputs[role] = {{"path", file},
                    {"fnv1a64", [&] {
                       char buf[32];
                       std::snprintf(buf, sizeof buf, "%016llx",
                                     static_cast<unsigned long long>(file_digest(file)));
                       return std::string(buf);
                     }()}};
  }
  void write_manifest() const {
    json m = {{"tool", "samgsr"},
              {"version", kVersion},
              {"format_version", kFormatVersion},
              {"subcommand", subcommand},
              {"config", config},
              {"inputs", inputs},
              {"counts", counts},
              {"timings_ms", timings},
              {"warnings", warnings}};
    std::ofstream out(path("manifest.json"), std::ios::binary);
    if (!out) throw io_error("cannot write manifest in " + out_dir);
    out << m.dump(2) << '\n';
    if (!out) throw io_error("manifest write failed");
  }
};

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

// "auto", a single value, or a comma list (one value per time point).
void apply_s0(ScreenOptions& opts, const std::string& text) {
  if (text == "auto") {
    opts.s0_request = kAutoS0;
    return;
  }
  auto parts = split(text, ',');
  if (parts.size() == 1) {
    opts.s0_request = parse_double(parts[0], "--s0");
    if (opts.s0_request < 0.0) throw io_error("--s0 must be nonnegative");
    return;
  }
  for (const auto& p : parts) {
    double v = parse_double(p, "--s0");
    if (v < 0.0) throw io_error("--s0 values must be nonnegative");
    opts.s0_list.push_back(v);
  }
}

json screen_config(const ScreenOptions& o) {
  json c = {{"permutations", o.permutations},
            {"seed", o.seed},
            {"q_cutoff", o.q_cutoff},
            {"fdr", o.fdr == FdrMode::BH ? "bh" : "none"},
            {"fresh_perms_per_set", o.fresh_perms_per_set}};
  if (!o.s0_list.empty()) c["s0"] = o.s0_list;
  else if (o.s0_request == kAutoS0) c["s0"] = "auto";
  else c["s0"] = o.s0_request;
  return c;
}

// Flags shared by screen/simple/two-level.
struct SelectArgs {
  std::string expr, labels, gmt, s0 = "auto", fdr = "none";
  PipelineOptions opts;
  double c_cutoff_both = -1.0;
  std::size_t min_set_size = 1;
  bool emit_trace = false;

  void add_screen_flags(CLI::App* cmd) {
    cmd->add_option("--expr", expr, "expression TSV")->required();
    cmd->add_option("--labels", labels, "phenotype TSV")->required();
    cmd->add_option("--permutations", opts.screen.permutations,
                    "label permutations")
        ->capture_default_str();
    cmd->add_option("--seed", opts.screen.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--s0", s0, "fudge factor: auto, value, or per-time list")
        ->capture_default_str();
    cmd->add_option("--q-cutoff", opts.screen.q_cutoff, "screening threshold")
        ->capture_default_str();
    cmd->add_option("--fdr", fdr, "q-value mode: none (q = p) or bh")
        ->check(CLI::IsMember({"none", "bh"}))
        ->capture_default_str();
    cmd->add_flag("--fresh-perms-per-set", opts.screen.fresh_perms_per_set,
                  "salt the permutation stream per set");
  }
  void add_reduce_flags(CLI::App* cmd) {
    cmd->add_option("--c-cutoff", c_cutoff_both,
                    "residual p-value cutoff for both reduction levels");
    cmd->add_option("--c-cutoff-genes", opts.c_cutoff_genes,
                    "gene-level residual cutoff")
        ->capture_default_str();
    cmd->add_option("--c-cutoff-times", opts.c_cutoff_times,
                    "time-level residual cutoff")
        ->capture_default_str();
    cmd->add_flag("--emit-trace", emit_trace, "write reduction trace TSV");
  }
  void resolve() {
    apply_s0(opts.screen, s0);
    opts.screen.fdr = fdr == "bh" ? FdrMode::BH : FdrMode::None;
    if (c_cutoff_both >= 0.0)
      opts.c_cutoff_genes = opts.c_cutoff_times = c_cutoff_both;
  }
};

void emit_selection_outputs(Run& run, const PipelineResult& result,
                            const LongitudinalMatrix& matrix, bool emit_trace) {
  write_signature(result.signature, run.path("signature.tsv"));
  write_screen(result.screen.rows, run.path("screen.tsv"));
  write_overlap(overlap_summary(result.signature), matrix.times,
                run.path("overlap.tsv"));
  if (emit_trace) write_trace(result.traces, run.path("trace.tsv"));
  run.counts = {{"units_screened", result.counts.units_screened},
                {"units_kept", result.counts.units_kept},
                {"core_genes", result.counts.core_genes},
                {"signature_genes", result.counts.signature_genes},
                {"signature_pairs", result.counts.signature_pairs}};
}

int cmd_screen(SelectArgs& args, Run& run) {
  args.resolve();
  run.config = screen_config(args.opts.screen);
  run.config["gmt"] = args.gmt;
  run.config["min_set_size"] = args.min_set_size;
  run.input("expr", args.expr);
  run.input("labels", args.labels);
  run.input("gmt", args.gmt);

  Timer load;
  auto matrix = load_expression(args.expr);
  auto labels = load_labels(args.labels);
  auto classes = compile_labels(labels, matrix);
  auto collection = load_gmt(args.gmt);
  CoverageReport coverage;
  auto restricted =
      restrict_to_matrix(collection, matrix, args.min_set_size, &coverage);
  run.timings["load"] = load.ms();
  run.warnings.push_back(coverage.to_string());
  if (run.dry_run) return 0;

  Timer compute;
  auto result = samgs_screen(matrix, classes, restricted, args.opts.screen);
  run.timings["screen"] = compute.ms();
  for (auto& w : result.warnings) run.warnings.push_back(w);

  write_screen(result.rows, run.path("screen.tsv"));
  std::size_t kept = 0;
  for (const auto& row : result.rows)
    if (row.q <= args.opts.screen.q_cutoff) ++kept;
  run.counts = {{"sets_screened", result.rows.size()}, {"sets_kept", kept}};
  return 0;
}

int cmd_select(SelectArgs& args, Run& run, bool two_level) {
  args.resolve();
  run.config = screen_config(args.opts.screen);
  run.config["c_cutoff_genes"] = args.opts.c_cutoff_genes;
  run.config["c_cutoff_times"] = args.opts.c_cutoff_times;
  run.input("expr", args.expr);
  run.input("labels", args.labels);

  Timer load;
  auto matrix = load_expression(args.expr);
  auto labels = load_labels(args.labels);
  auto classes = compile_labels(labels, matrix);
  GeneSetCollection restricted;
  if (two_level) {
    run.config["gmt"] = args.gmt;
    run.config["min_set_size"] = args.min_set_size;
    run.input("gmt", args.gmt);
    CoverageReport coverage;
    restricted = restrict_to_matrix(load_gmt(args.gmt), matrix,
                                    args.min_set_size, &coverage);
    run.warnings.push_back(coverage.to_string());
  }
  run.timings["load"] = load.ms();
  if (run.dry_run) return 0;

  Timer compute;
  PipelineResult result =
      two_level ? two_level_samgsr(matrix, classes, restricted, args.opts)
                : simple_samgsr(matrix, classes, args.opts);
  run.timings["select"] = compute.ms();
  for (auto& w : result.warnings) run.warnings.push_back(w);
  emit_selection_outputs(run, result, matrix, args.emit_trace);
  return 0;
}

struct EvaluateArgs {
  std::string signature, train_expr, train_labels, test_expr, test_labels;
  double svm_c = 1.0;
};

int cmd_evaluate(EvaluateArgs& args, Run& run) {
  run.config = {{"svm_c", args.svm_c}};
  run.input("signature", args.signature);
  run.input("train_expr", args.train_expr);
  run.input("train_labels", args.train_labels);
  run.input("test_expr", args.test_expr);
  run.input("test_labels", args.test_labels);

  Timer load;
  auto signature = load_signature(args.signature);
  auto train_matrix = load_expression(args.train_expr);
  auto train_classes = compile_labels(load_labels(args.train_labels), train_matrix);
  auto test_matrix = load_expression(args.test_expr);
  auto test_classes = compile_labels(load_labels(args.test_labels), test_matrix);
  run.timings["load"] = load.ms();
  if (run.dry_run) return 0;

  Timer compute;
  EvaluateOptions opts;
  opts.train.c = args.svm_c;
  auto report = evaluate_signature(signature, train_matrix, train_classes,
                                   test_matrix, test_classes, opts);
  run.timings["evaluate"] = compute.ms();
  for (auto& w : report.warnings) run.warnings.push_back(w);

  write_metrics(report, run.path("metrics.tsv"));
  run.counts = {{"time_points", train_matrix.n_times()},
                {"signature_pairs", signature.entries.size()}};
  return 0;
}

struct SimulateArgs {
  std::string preset, spec_file, method = "simple", resample_expr, gmt;
  SimSpec spec;
  SelectArgs select;  // reuses cutoff/permutation flags
  bool emit_signatures = false;
  bool have_replicates = false, have_subjects = false, have_noise = false,
       have_rho = false, have_block = false, have_ar1 = false, have_seed = false;
};

// key = value lines; '#' starts a comment. Keys mirror the SimSpec fields;
// `term = GENE,TIME,BETA` repeats, with TIME 1-based as published.
SimSpec parse_spec_file(const std::string& path) {
  SimSpec spec;
  spec.terms.clear();
  for (auto& raw : read_lines(path)) {
    std::string line = raw.substr(0, raw.find('#'));
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      auto last = s.find_last_not_of(" \t");
      s.erase(last == std::string::npos ? 0 : last + 1);
      return s;
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "subjects") spec.n_subjects = std::stoul(value);
    else if (key == "noise_genes") spec.n_noise_genes = std::stoul(value);
    else if (key == "times") spec.n_times = std::stoul(value);
    else if (key == "replicates") spec.replicates = std::stoul(value);
    else if (key == "rho") spec.rho = parse_double(value, "spec rho");
    else if (key == "block_size") spec.block_size = std::stoul(value);
    else if (key == "ar1") spec.ar1 = parse_double(value, "spec ar1");
    else if (key == "seed") spec.seed = std::stoull(value);
    else if (key == "term") {
      auto parts = split(value, ',');
      if (parts.size() != 3)
        throw io_error("spec term must be GENE,TIME,BETA: " + value);
      CausalTerm term;
      term.gene = parts[0];
      term.time_index = std::stoi(parts[1]) - 1;
      term.beta = parse_double(parts[2], "spec term beta");
      spec.terms.push_back(std::move(term));
    } else {
      throw io_error("unknown spec key: " + key);
    }
  }
  return spec;
}

int cmd_simulate(SimulateArgs& args, Run& run) {
  args.select.resolve();
  SimSpec spec;
  if (!args.spec_file.empty()) {
    spec = parse_spec_file(args.spec_file);
    run.input("spec", args.spec_file);
  } else if (args.preset == "sim1") {
    spec = sim1_preset();
  } else if (args.preset == "sim2") {
    spec = sim2_preset();
  } else {
    throw io_error("simulate needs --preset sim1|sim2 or --spec FILE");
  }
  if (args.have_replicates) spec.replicates = args.spec.replicates;
  if (args.have_subjects) spec.n_subjects = args.spec.n_subjects;
  if (args.have_noise) spec.n_noise_genes = args.spec.n_noise_genes;
  if (args.have_rho) spec.rho = args.spec.rho;
  if (args.have_block) spec.block_size = args.spec.block_size;
  if (args.have_ar1) spec.ar1 = args.spec.ar1;
  if (args.have_seed) spec.seed = args.spec.seed;

  LongitudinalMatrix source;
  GeneSetCollection external;
  if (!args.resample_expr.empty()) {
    run.input("resample_expr", args.resample_expr);
    source = load_expression(args.resample_expr);
    spec.source = &source;
    spec.n_times = source.n_times();
  }
  bool two_level = args.method == "two-level";
  if (!args.gmt.empty()) {
    run.input("gmt", args.gmt);
    external = load_gmt(args.gmt);
  }
  if (two_level && spec.source && external.sets.empty())
    throw io_error("two-level resample simulation needs --gmt");

  json terms = json::array();
  for (const auto& t : spec.terms)
    terms.push_back({{"gene", t.gene}, {"time", t.time_index + 1}, {"beta", t.beta}});
  run.config = {{"method", args.method},
                {"preset", args.preset},
                {"terms", terms},
                {"subjects", spec.n_subjects},
                {"noise_genes", spec.n_noise_genes},
                {"times", spec.n_times},
                {"replicates", spec.replicates},
                {"rho", spec.rho},
                {"block_size", spec.block_size},
                {"ar1", spec.ar1},
                {"seed", spec.seed},
                {"screen", screen_config(args.select.opts.screen)},
                {"c_cutoff_genes", args.select.opts.c_cutoff_genes},
                {"c_cutoff_times", args.select.opts.c_cutoff_times}};
  if (run.dry_run) {
    generate(spec, 0);  // validates the design end to end
    return 0;
  }

  Timer compute;
  std::vector<Signature> signatures;
  auto table = run_benchmark(spec, two_level ? Method::TwoLevel : Method::Simple,
                             args.select.opts,
                             external.sets.empty() ? nullptr : &external,
                             args.emit_signatures ? &signatures : nullptr);
  run.timings["simulate"] = compute.ms();

  write_selection_table(table, run.path("selection.tsv"));
  if (args.emit_signatures)
    for (std::size_t r = 0; r < signatures.size(); ++r) {
      char name[48];
      std::snprintf(name, sizeof name, "signature_rep%04zu.tsv", r + 1);
      write_signature(signatures[r], run.path(name));
    }
  run.counts = {{"replicates", table.replicates},
                {"causal_genes", table.causal_genes.size()}};
  return 0;
}

struct ReportArgs {
  std::string signature, expr, labels;
};

int cmd_report(ReportArgs& args, Run& run) {
  run.input("signature", args.signature);
  run.input("expr", args.expr);
  run.input("labels", args.labels);

  auto signature = load_signature(args.signature);
  auto matrix = load_expression(args.expr);
  auto classes = compile_labels(load_labels(args.labels), matrix);
  if (run.dry_run) return 0;

  // The signature's own time indices come from file order; map labels onto
  // the matrix ordering for plotting.
  for (auto& e : signature.entries) {
    int t = matrix.time_index(e.time_label);
    if (t < 0)
      throw data_error("signature time label not in matrix: " + e.time_label);
    e.time_index = t;
  }
  std::sort(signature.entries.begin(), signature.entries.end(),
            [](const SignatureEntry& a, const SignatureEntry& b) {
              if (a.gene != b.gene) return a.gene < b.gene;
              return a.time_index < b.time_index;
            });

  auto genes = signature.unique_genes();
  auto means = subgroup_means(matrix, classes, genes);
  write_subgroup_means(means, run.path("subgroup_means.csv"));

  {
    auto rows = overlap_summary(signature);
    std::ofstream out(run.path("overlap_counts.csv"), std::ios::binary);
    if (!out) throw io_error("cannot write overlap_counts.csv");
    out << "time_subset,genes\n";
    for (const auto& row : rows) {
      std::string subset;
      for (int t : row.times) {
        if (!subset.empty()) subset += '+';
        subset += matrix.times[t].label;
      }
      out << subset << ',' << row.count << '\n';
    }
  }

  for (const auto& gene : genes) {
    std::vector<SubgroupMeanRow> gene_rows;
    for (const auto& row : means)
      if (row.gene == gene) gene_rows.push_back(row);
    std::ofstream out(run.path("subgroup_" + gene + ".svg"), std::ios::binary);
    if (!out) throw io_error("cannot write SVG for gene " + gene);
    out << subgroup_svg(gene_rows, gene);
  }
  run.counts = {{"genes", genes.size()},
                {"pairs", signature.entries.size()},
                {"svg_files", genes.size()}};
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature selection for longitudinal two-class expression data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("samgsr ") + kVersion);
  app.set_config("--config", "", "key=value config file (flags win)");

  int threads = 0;
  app.add_option("--threads", threads,
                 "worker threads (default: all available)")
      ->envname("SAMGSR_THREADS");

  Run run;
  app.add_option("--out", run.out_dir, "output directory")
      ->capture_default_str();
  app.add_flag("--dry-run", run.dry_run,
               "validate inputs and print resolved config, compute nothing");

  SelectArgs screen_args, simple_args, two_args;
  auto* screen = app.add_subcommand("screen", "score gene sets by SAMGS");
  screen_args.add_screen_flags(screen);
  screen->add_option("--gmt", screen_args.gmt, "gene-set GMT file")->required();
  screen->add_option("--min-set-size", screen_args.min_set_size,
                     "drop smaller sets after restriction")
      ->capture_default_str();

  auto* simple = app.add_subcommand("simple", "per-gene selection over time points");
  simple_args.add_screen_flags(simple);
  simple_args.add_reduce_flags(simple);

  auto* two = app.add_subcommand("two-level", "gene-set selection, then time points");
  two_args.add_screen_flags(two);
  two_args.add_reduce_flags(two);
  two->add_option("--gmt", two_args.gmt, "gene-set GMT file")->required();
  two->add_option("--min-set-size", two_args.min_set_size,
                  "drop smaller sets after restriction")
      ->capture_default_str();

  EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "train and score per time point");
  evaluate->add_option("--signature", eval_args.signature, "signature TSV")->required();
  evaluate->add_option("--train-expr", eval_args.train_expr)->required();
  evaluate->add_option("--train-labels", eval_args.train_labels)->required();
  evaluate->add_option("--test-expr", eval_args.test_expr)->required();
  evaluate->add_option("--test-labels", eval_args.test_labels)->required();
  evaluate->add_option("--svm-c", eval_args.svm_c, "hinge penalty")
      ->capture_default_str();

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "planted-signal benchmark");
  simulate->add_option("--preset", sim_args.preset, "sim1 or sim2")
      ->check(CLI::IsMember({"sim1", "sim2"}));
  simulate->add_option("--spec", sim_args.spec_file, "SimSpec key=value file");
  simulate->add_option("--method", sim_args.method)
      ->check(CLI::IsMember({"simple", "two-level"}))
      ->capture_default_str();
  simulate->add_option("--replicates", sim_args.spec.replicates)
      ->each([&](const std::string&) { sim_args.have_replicates = true; });
  simulate->add_option("--subjects", sim_args.spec.n_subjects)
      ->each([&](const std::string&) { sim_args.have_subjects = true; });
  simulate->add_option("--noise-genes", sim_args.spec.n_noise_genes)
      ->each([&](const std::string&) { sim_args.have_noise = true; });
  simulate->add_option("--rho", sim_args.spec.rho, "noise block correlation")
      ->each([&](const std::string&) { sim_args.have_rho = true; });
  simulate->add_option("--block-size", sim_args.spec.block_size)
      ->each([&](const std::string&) { sim_args.have_block = true; });
  simulate->add_option("--ar1", sim_args.spec.ar1, "within-gene time correlation")
      ->each([&](const std::string&) { sim_args.have_ar1 = true; });
  simulate->add_option("--seed", sim_args.spec.seed)
      ->each([&](const std::string&) { sim_args.have_seed = true; });
  simulate->add_option("--resample-expr", sim_args.resample_expr,
                       "draw noise from this expression matrix");
  simulate->add_option("--gmt", sim_args.gmt, "gene sets for two-level");
  simulate->add_flag("--emit-signatures", sim_args.emit_signatures,
                     "write every replicate's signature");
  sim_args.select.opts.screen.permutations = 500;
  simulate->add_option("--permutations", sim_args.select.opts.screen.permutations)
      ->capture_default_str();
  simulate->add_option("--q-cutoff", sim_args.select.opts.screen.q_cutoff)
      ->capture_default_str();
  simulate->add_option("--c-cutoff", sim_args.select.c_cutoff_both);
  simulate->add_option("--c-cutoff-genes", sim_args.select.opts.c_cutoff_genes)
      ->capture_default_str();
  simulate->add_option("--c-cutoff-times", sim_args.select.opts.c_cutoff_times)
      ->capture_default_str();

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "tables and plots for a signature");
  report->add_option("--signature", report_args.signature)->required();
  report->add_option("--expr", report_args.expr)->required();
  report->add_option("--labels", report_args.labels)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (threads > 0) omp_set_num_threads(threads);

  try {
    std::filesystem::create_directories(run.out_dir);
    Timer total;
    int rc = 1;
    if (screen->parsed()) {
      run.subcommand = "screen";
      rc = cmd_screen(screen_args, run);
    } else if (simple->parsed()) {
      run.subcommand = "simple";
      rc = cmd_select(simple_args, run, false);
    } else if (two->parsed()) {
      run.subcommand = "two-level";
      rc = cmd_select(two_args, run, true);
    } else if (evaluate->parsed()) {
      run.subcommand = "evaluate";
      rc = cmd_evaluate(eval_args, run);
    } else if (simulate->parsed()) {
      run.subcommand = "simulate";
      rc = cmd_simulate(sim_args, run);
    } else if (report->parsed()) {
      run.subcommand = "report";
      rc = cmd_report(report_args, run);
    }
    run.config["threads"] = threads;
    run.timings["total"] = total.ms();
    print_warnings(run.warnings);
    if (run.dry_run) {
      json resolved = {{"subcommand", run.subcommand},
                       {"config", run.config},
                       {"inputs", run.inputs}};
      std::cout << resolved.dump(2) << '\n';
      return rc;
    }
    run.write_manifest();
    return rc;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const data_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  }
}
