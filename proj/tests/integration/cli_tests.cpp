// End-to-end checks of the command line tool: spawns the real binary and
// inspects exit codes and output files. argv[1] = binary, argv[2] = fixture dir.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string g_bin;
std::string g_data;
fs::path g_work;
int g_failures = 0;

void check(bool ok, const std::string& what) {
  if (ok) {
    std::cout << "ok: " << what << '\n';
  } else {
    std::cout << "FAIL: " << what << '\n';
    ++g_failures;
  }
}

int run(const std::string& args, const std::string& stdout_to = "") {
  std::string cmd = g_bin + " " + args;
  if (!stdout_to.empty()) cmd += " > " + stdout_to;
  cmd += " 2> " + (g_work / "stderr.txt").string();
  int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string fixture(const std::string& name) { return g_data + "/" + name; }

fs::path fresh_dir(const std::string& name) {
  fs::path dir = g_work / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string toy_args(const std::string& sub) {
  return sub + " --expr " + fixture("toy_expression.tsv") + " --labels " +
         fixture("toy_labels.tsv");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: cli_tests <samgsr-binary> <fixture-dir>\n";
    return 2;
  }
  g_bin = argv[1];
  g_data = argv[2];
  g_work = fs::temp_directory_path() / "samgsr_cli_tests";
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  {
    auto out = fresh_dir("screen");
    int rc = run("--out " + out.string() + " " + toy_args("screen") + " --gmt " +
                 fixture("toy_sets.gmt") + " --permutations 100 --seed 4");
    check(rc == 0, "screen exits 0");
    auto table = slurp(out / "screen.tsv");
    check(table.rfind("set_name\tsize\tsamgs\tp\tq\n", 0) == 0, "screen table header");
    check(table.find("SIGNAL") != std::string::npos, "screen table lists sets");
    check(slurp(out / "manifest.json").find("\"subcommand\": \"screen\"") !=
              std::string::npos,
          "manifest names the subcommand");
  }

  {
    auto out = fresh_dir("simple");
    int rc = run("--out " + out.string() + " " + toy_args("simple") +
                 " --permutations 100 --seed 4 --emit-trace");
    check(rc == 0, "simple exits 0");
    check(fs::exists(out / "signature.tsv"), "simple writes the signature");
    check(fs::exists(out / "overlap.tsv"), "simple writes the overlap table");
    check(fs::exists(out / "trace.tsv"), "simple honors --emit-trace");
    check(slurp(out / "signature.tsv").rfind("gene\ttime_label\td\tstage\n", 0) == 0,
          "signature header");
    auto out2 = fresh_dir("simple_again");
    run("--out " + out2.string() + " " + toy_args("simple") +
        " --permutations 100 --seed 4 --emit-trace");
    check(slurp(out / "signature.tsv") == slurp(out2 / "signature.tsv"),
          "same seed reproduces the signature byte for byte");
    auto out3 = fresh_dir("simple_other_seed");
    run("--out " + out3.string() + " " + toy_args("simple") +
        " --permutations 100 --seed 5 --emit-trace");
    check(slurp(out / "trace.tsv") != slurp(out3 / "trace.tsv"),
          "a different seed changes the trace");
  }

  {
    auto out = fresh_dir("twolevel");
    int rc = run("--out " + out.string() + " " + toy_args("two-level") + " --gmt " +
                 fixture("toy_sets.gmt") + " --permutations 100 --seed 4");
    check(rc == 0, "two-level exits 0");
    auto sig = slurp(out / "signature.tsv");
    check(sig.find("ALPHA") != std::string::npos, "two-level selects the planted gene");
    check(fs::exists(out / "screen.tsv"), "two-level writes the screen table");
  }

  {
    auto out = fresh_dir("evaluate");
    int rc = run("--out " + out.string() + " evaluate --signature " +
                 fixture("sep_signature.tsv") + " --train-expr " +
                 fixture("sep_train_expr.tsv") + " --train-labels " +
                 fixture("sep_train_labels.tsv") + " --test-expr " +
                 fixture("sep_test_expr.tsv") + " --test-labels " +
                 fixture("sep_test_labels.tsv"));
    check(rc == 0, "evaluate exits 0");
    auto metrics = slurp(out / "metrics.tsv");
    check(metrics.rfind("metric\t", 0) == 0, "metrics table header");
    check(metrics.find("error_pct\t0\t0\t0\t0") != std::string::npos,
          "separable fixture evaluates to zero error");
  }

  {
    auto out = fresh_dir("simulate");
    int rc = run("--out " + out.string() +
                 " simulate --preset sim1 --replicates 2 --subjects 24"
                 " --noise-genes 18 --block-size 5 --permutations 60 --seed 6 --emit-signatures");
    check(rc == 0, "simulate exits 0");
    check(fs::exists(out / "selection.tsv"), "simulate writes the selection table");
    check(fs::exists(out / "signature_rep0001.tsv") &&
              fs::exists(out / "signature_rep0002.tsv"),
          "simulate honors --emit-signatures");
    auto table = slurp(out / "selection.tsv");
    check(table.find("F13A1_pct") != std::string::npos &&
              table.find("GSTM1_pct") != std::string::npos,
          "selection table reports both causal genes");
  }

  {
    auto spec = g_work / "custom.spec";
    std::ofstream(spec) << "# custom generator settings\n"
                        << "subjects = 24\nnoise_genes = 11\ntimes = 3\n"
                        << "replicates = 2\nrho = 0.1\nblock_size = 4\n"
                        << "ar1 = 0.2\nseed = 12\n"
                        << "term = HIT,2,1.5\n";
    auto out = fresh_dir("simulate_spec");
    int rc = run("--out " + out.string() + " simulate --spec " + spec.string() +
                 " --permutations 60");
    check(rc == 0, "simulate accepts a spec file");
    check(slurp(out / "selection.tsv").find("HIT_pct") != std::string::npos,
          "spec-file causal gene reaches the table");
    std::ofstream(spec) << "term = ONLYGENE,1\n";
    check(run("--out " + out.string() + " simulate --spec " + spec.string()) == 2,
          "malformed spec term exits 2");
  }

  {
    auto sig_dir = fresh_dir("report_sig");
    run("--out " + sig_dir.string() + " " + toy_args("simple") +
        " --permutations 100 --seed 4");
    auto out = fresh_dir("report");
    int rc = run("--out " + out.string() + " report --signature " +
                 (sig_dir / "signature.tsv").string() + " --expr " +
                 fixture("toy_expression.tsv") + " --labels " +
                 fixture("toy_labels.tsv"));
    check(rc == 0, "report exits 0");
    check(fs::exists(out / "subgroup_means.csv"), "report writes subgroup means");
    check(fs::exists(out / "overlap_counts.csv"), "report writes overlap counts");
    check(fs::exists(out / "subgroup_ALPHA.svg"), "report writes one svg per gene");
    check(slurp(out / "subgroup_ALPHA.svg").find("</svg>") != std::string::npos,
          "svg is complete");
  }

  {
    auto empty_sig = g_work / "empty_signature.tsv";
    std::ofstream(empty_sig) << "gene\ttime_label\td\tstage\n";
    auto out = fresh_dir("report_empty");
    int rc = run("--out " + out.string() + " report --signature " +
                 empty_sig.string() + " --expr " + fixture("toy_expression.tsv") +
                 " --labels " + fixture("toy_labels.tsv"));
    check(rc == 0, "report on an empty signature exits 0");
    check(slurp(out / "subgroup_means.csv") == "gene,time_label,time_index,class,mean,n\n",
          "empty signature leaves a header-only means table");
    bool svg_absent = true;
    for (const auto& entry : fs::directory_iterator(out))
      if (entry.path().extension() == ".svg") svg_absent = false;
    check(svg_absent, "empty signature produces no svg");
  }

  {
    check(run(toy_args("simple") + " --expr /nonexistent/file.tsv") == 2,
          "missing input exits 2");
    check(run("--out " + (g_work / "x").string() + " " + toy_args("simple") +
              " --bogus-flag") == 2,
          "unknown flag exits 2");
    check(run("nosuchcommand") == 2, "unknown subcommand exits 2");
    check(run("--out " + (g_work / "x").string() + " " + toy_args("simple") +
              " --s0 -0.5") == 2,
          "negative s0 exits 2");

    auto bad_labels = g_work / "one_class.tsv";
    std::ofstream(bad_labels) << "S1\tcase\nS2\tcase\nS3\tcase\nS4\tcase\n"
                              << "S5\tcase\nS6\tcase\nS7\tcase\nS8\tcase\n";
    check(run("--out " + (g_work / "x").string() + " simple --expr " +
              fixture("toy_expression.tsv") + " --labels " + bad_labels.string() +
              " --permutations 50") == 3,
          "single-class labels exit 3");
    check(run("--out " + (g_work / "x").string() + " " + toy_args("screen") +
              " --gmt " + fixture("toy_sets.gmt") + " --min-set-size 99") == 3,
          "over-restriction exits 3");
  }

  {
    auto out = fresh_dir("dryrun");
    auto json_path = g_work / "dryrun.json";
    int rc = run("--out " + out.string() + " --dry-run " + toy_args("simple") +
                     " --seed 33 --permutations 500",
                 json_path.string());
    check(rc == 0, "dry run exits 0");
    check(!fs::exists(out / "signature.tsv") && !fs::exists(out / "manifest.json"),
          "dry run computes nothing");
    auto text = slurp(json_path);
    check(text.find("\"seed\": 33") != std::string::npos,
          "dry run prints the resolved seed");
    check(text.find("\"permutations\": 500") != std::string::npos,
          "dry run prints the resolved permutation count");
  }

  {
    auto cfg = g_work / "settings.ini";
    std::ofstream(cfg) << "[simple]\nseed=21\npermutations=70\n";
    auto json_path = g_work / "config.json";
    run("--config " + cfg.string() + " --dry-run " + toy_args("simple"),
        json_path.string());
    auto text = slurp(json_path);
    check(text.find("\"seed\": 21") != std::string::npos &&
              text.find("\"permutations\": 70") != std::string::npos,
          "config file values are picked up");
    run("--config " + cfg.string() + " --dry-run " + toy_args("simple") +
            " --seed 99",
        json_path.string());
    text = slurp(json_path);
    check(text.find("\"seed\": 99") != std::string::npos,
          "command line overrides the config file");
    check(text.find("\"permutations\": 70") != std::string::npos,
          "unoverridden config values persist");
  }

  {
    auto ver_path = g_work / "version.txt";
    int rc = run("--version", ver_path.string());
    check(rc == 0, "--version exits 0");
    check(slurp(ver_path).rfind("samgsr 1", 0) == 0, "--version prints the tool id");
  }

  std::cout << (g_failures == 0 ? "ALL CLI TESTS PASSED\n"
                                : std::to_string(g_failures) + " FAILURES\n");
  return g_failures == 0 ? 0 : 1;
}
