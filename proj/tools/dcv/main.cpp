#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dcv/compiler/compile.hpp"
#include "dcv/inference/verify.hpp"
#include "dcv/report/report.hpp"
#include "dcv/solver/process.hpp"

namespace fs = std::filesystem;
using namespace dcv;

#ifndef DCV_DEFAULT_SOLVER
#define DCV_DEFAULT_SOLVER "z3"
#endif

namespace {

constexpr int kInputError = 2;
constexpr int kDriverError = 3;

struct Flags {
  std::string solver;
  double qtimeout = 10;
  double budget = 3600;
  std::string dumpSmt;
  std::string format = "text";
  bool noPattern2 = false;
  bool noPolarity = false;
  bool noGround = false;
  bool trace = false;
  unsigned jobs = 1;
  std::string jsonOut = "dcv-bench.json";
};

std::string defaultSolver() {
  if (const char* env = std::getenv("DCV_SOLVER"); env && *env) return env;
  return DCV_DEFAULT_SOLVER;
}

inference::VerifierConfig makeConfig(const Flags& f) {
  inference::VerifierConfig cfg;
  cfg.solver.path = f.solver.empty() ? defaultSolver() : f.solver;
  cfg.solver.timeout = std::chrono::milliseconds(static_cast<long long>(f.qtimeout * 1000));
  cfg.solver.groundQuantifiers = !f.noGround;
  if (!f.dumpSmt.empty()) cfg.solver.dumpDir = fs::path(f.dumpSmt);
  cfg.budget = std::chrono::seconds(static_cast<long long>(f.budget));
  cfg.candidates.pattern2 = !f.noPattern2;
  cfg.candidates.polarity = !f.noPolarity;
  return cfg;
}

void printDiagnostics(const compiler::Compiled& c, const std::string& file, const Flags& f) {
  if (c.diagnostics.empty()) return;
  if (f.format == "json") {
    std::cerr << frontend::formatJson(c.diagnostics, file) << '\n';
    return;
  }
  for (const auto& d : c.diagnostics) std::cerr << frontend::format(d, file) << '\n';
}

int cmdVerify(const std::string& path, const Flags& f) {
  compiler::Compiled c = compiler::compileFile(path);
  printDiagnostics(c, path, f);
  if (!c.ok()) return kInputError;
  inference::VerifierConfig cfg = makeConfig(f);
  cfg.namePrefix = c.contract->name();
  std::vector<report::ContractReport> reports{report::verifyFile(path, cfg)};
  if (f.format == "json") std::cout << report::renderJson(reports, "verify", f.trace);
  else std::cout << report::renderText(reports.front(), f.trace);
  for (const auto& p : reports.front().properties)
    if (p.solverError) std::cerr << path << ": solver error: " << p.detail << '\n';
  return report::exitCode(reports);
}

int cmdCompile(const std::string& path, const Flags& f) {
  compiler::Compiled c = compiler::compileFile(path);
  printDiagnostics(c, path, f);
  if (!c.ok()) return kInputError;
  const auto& ts = *c.system;
  if (f.format == "json") std::cout << report::dumpJson(c.contract->name(), ts);
  else std::cout << logic::dump(ts);
  if (!f.dumpSmt.empty()) {
    fs::create_directories(f.dumpSmt);
    solver::SolverConfig sc = makeConfig(f).solver;
    for (const auto& prop : ts.properties)
      for (const auto& o : inference::plainObligations(ts, prop, c.contract->name() + "." + prop.name)) {
        auto script = solver::emit(sc.groundQuantifiers ? solver::ground(o, sc.grounding) : o);
        fs::path out = fs::path(f.dumpSmt) / (solver::sanitizeFileName(o.name) + ".smt2");
        std::ofstream(out, std::ios::binary) << script.text;
        if (f.format != "json") std::cout << "wrote " << out.string() << '\n';
      }
  }
  return 0;
}

int cmdBench(const std::string& dir, const Flags& f) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    std::cerr << dir << ": not a directory\n";
    return kInputError;
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".dcn") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  inference::VerifierConfig cfg = makeConfig(f);
  std::vector<report::ContractReport> reports(files.size());
  unsigned jobs = std::max(1u, f.jobs);
  for (std::size_t start = 0; start < files.size(); start += jobs) {
    std::vector<std::future<report::ContractReport>> batch;
    for (std::size_t i = start; i < std::min(files.size(), start + jobs); ++i) {
      inference::VerifierConfig c = cfg;
      c.namePrefix = files[i].stem().string();
      batch.push_back(std::async(std::launch::async, [c, p = files[i]] { return report::verifyFile(p, c); }));
    }
    for (std::size_t k = 0; k < batch.size(); ++k) reports[start + k] = batch[k].get();
  }

  std::string json = report::renderJson(reports, "bench", f.trace);
  if (f.format == "json") {
    std::cout << json;
  } else {
    std::cout << report::renderTable(reports);
    if (f.trace)
      for (const auto& r : reports) std::cout << '\n' << report::renderText(r, true);
  }
  if (!f.jsonOut.empty()) std::ofstream(f.jsonOut, std::ios::binary) << json;
  for (const auto& r : reports)
    for (const auto& d : r.diagnostics) std::cerr << d << '\n';
  // Failing contracts are recorded in the table; only the verdicts decide.
  int code = report::exitCode(reports);
  return code == kInputError ? 1 : code;
}

void addCommon(CLI::App* app, Flags& f) {
  app->add_option("--solver", f.solver, "SMT solver executable (default: $DCV_SOLVER or " DCV_DEFAULT_SOLVER ")");
  app->add_option("--qtimeout", f.qtimeout, "per-query timeout in seconds")->check(CLI::NonNegativeNumber);
  app->add_option("--budget", f.budget, "per-property time budget in seconds")->check(CLI::NonNegativeNumber);
  app->add_option("--dump-smt", f.dumpSmt, "write SMT-LIB scripts into DIR");
  app->add_option("--format", f.format, "output format")->check(CLI::IsMember({"text", "json"}));
  app->add_flag("--no-pattern2", f.noPattern2, "only use single-predicate candidates");
  app->add_flag("--no-polarity", f.noPolarity, "only use negated predicates in candidates");
  app->add_flag("--no-ground", f.noGround, "leave quantifiers to the solver");
  app->add_flag("--trace", f.trace, "log invariant-inference rounds");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"dcv: safety verification of DeCon contracts"};
  app.require_subcommand(1);
  Flags f;
  std::string path;

  auto* verify = app.add_subcommand("verify", "verify every violation property of a contract");
  verify->add_option("path", path, ".dcn file")->required();
  addCommon(verify, f);

  auto* compile = app.add_subcommand("compile", "print the transition system");
  compile->add_option("path", path, ".dcn file")->required();
  addCommon(compile, f);

  auto* bench = app.add_subcommand("bench", "verify every contract of a directory");
  bench->add_option("path", path, "corpus directory")->required();
  bench->add_option("--jobs,-j", f.jobs, "contracts verified in parallel")->check(CLI::PositiveNumber);
  bench->add_option("--json-out", f.jsonOut, "JSON report file (empty: none)");
  addCommon(bench, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*verify) return cmdVerify(path, f);
    if (*compile) return cmdCompile(path, f);
    return cmdBench(path, f);
  } catch (const std::exception& e) {
    std::cerr << "dcv: " << e.what() << '\n';
    return kDriverError;
  }
}
