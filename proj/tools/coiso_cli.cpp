// coiso: command-line front end over libcoiso.
//
//   coiso check FILE
//   coiso thicken FILE [--out OUT]
//   coiso nijenhuis FILE
//   coiso reeb FILE
//   coiso moser-verify FILE1 FILE2 [--steps N --tol T --box B --samples S --seed K]
//
// The JSON report goes to stdout; the exit code is 0, 1 or 2 as in the report.

#include <coiso/coiso.h>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

namespace {

struct ProblemDeleter {
  void operator()(coiso_problem* p) const { coiso_problem_free(p); }
};
struct ReportDeleter {
  void operator()(coiso_report* r) const { coiso_report_free(r); }
};
using ProblemPtr = std::unique_ptr<coiso_problem, ProblemDeleter>;
using ReportPtr = std::unique_ptr<coiso_report, ReportDeleter>;

ProblemPtr load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "coiso: cannot read " << path << "\n";
    std::exit(2);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  coiso_problem* p = nullptr;
  if (coiso_problem_new(ss.str().c_str(), &p) != COISO_OK) {
    std::cerr << "coiso: " << coiso_last_error() << "\n";
    std::exit(2);
  }
  return ProblemPtr(p);
}

int emit(coiso_status s, coiso_report* raw, const std::string& out_path = {}) {
  ReportPtr r(raw);
  if (s != COISO_OK) {
    std::cerr << "coiso: " << coiso_last_error() << "\n";
    return 2;
  }
  std::fputs(coiso_report_json(r.get()), stdout);
  const std::string artifact = coiso_report_artifact(r.get());
  if (!out_path.empty() && !artifact.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    out << artifact;
    if (!out) {
      std::cerr << "coiso: cannot write " << out_path << "\n";
      return 2;
    }
  }
  return coiso_report_exit_code(r.get());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coisotropic embeddings of degenerate geometric structures"};
  app.set_version_flag("--version", std::string(coiso_version()));
  app.require_subcommand(1);

  coiso_options opts;
  coiso_options_init(&opts);
  bool timing = false;
  int threads = 0;
  app.add_flag("--timing", timing, "Add wall-clock timing to the report");
  app.add_option("--threads", threads, "Worker threads for grid loops (default: COISO_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  std::string file1;
  std::string file2;
  std::string out_path;
  std::string box = "1/10";

  auto* check = app.add_subcommand("check", "Validate a structure: closedness, ranks, axioms, involutivity");
  check->add_option("file", file1)->required();
  auto* thicken = app.add_subcommand("thicken", "Build and verify the coisotropic thickening");
  thicken->add_option("file", file1)->required();
  thicken->add_option("--out", out_path, "Write the thickened chart file here");
  auto* nij = app.add_subcommand("nijenhuis", "Nijenhuis tensor of the P block");
  nij->add_option("file", file1)->required();
  auto* reeb = app.add_subcommand("reeb", "Reeb families on the grid");
  reeb->add_option("file", file1)->required();
  auto* moser = app.add_subcommand("moser-verify", "Homotopy primitive, Moser flow and Reeb proportionality");
  moser->add_option("file1", file1)->required();
  moser->add_option("file2", file2)->required();
  moser->add_option("--steps", opts.steps, "RK4 steps")->check(CLI::PositiveNumber);
  moser->add_option("--tol", opts.tolerance, "Error tolerance")->check(CLI::PositiveNumber);
  moser->add_option("--box", box, "Sample box half-width (exact decimal)");
  moser->add_option("--samples", opts.samples, "Number of random samples")->check(CLI::PositiveNumber);
  moser->add_option("--seed", opts.seed, "Sample seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  opts.timing = timing ? 1 : 0;
  opts.box = box.c_str();
  coiso_set_threads(threads);

  coiso_report* r = nullptr;
  if (check->parsed()) {
    ProblemPtr p = load(file1);
    const coiso_status s = coiso_check(p.get(), &opts, &r);
    return emit(s, r);
  }
  if (thicken->parsed()) {
    ProblemPtr p = load(file1);
    const coiso_status s = coiso_thicken(p.get(), &opts, &r);
    return emit(s, r, out_path);
  }
  if (nij->parsed()) {
    ProblemPtr p = load(file1);
    const coiso_status s = coiso_nijenhuis(p.get(), &opts, &r);
    return emit(s, r);
  }
  if (reeb->parsed()) {
    ProblemPtr p = load(file1);
    const coiso_status s = coiso_reeb(p.get(), &opts, &r);
    return emit(s, r);
  }
  ProblemPtr p1 = load(file1);
  ProblemPtr p2 = load(file2);
  const coiso_status s = coiso_moser_verify(p1.get(), p2.get(), &opts, &r);
    return emit(s, r);
}
