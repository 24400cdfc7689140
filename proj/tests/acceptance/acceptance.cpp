// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "dcv/inference/candidates.hpp"
#include "dcv/report/report.hpp"
#include "dcv/solver/process.hpp"
#include "support/bridge.hpp"
#include "support/oracle.hpp"
#include "support/toys.hpp"

namespace {

using namespace dcv;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string secs(double s) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(1) << s << " s";
  return o.str();
}

int failures = 0;

void line(int id, bool pass, const std::string& what) {
  if (!pass) ++failures;
  std::cout << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << "  " << what << std::endl;
}

const char* kContracts[] = {"auction", "crowdFunding", "erc20", "paymentSplitter", "vestingWallet", "voting", "wallet"};

inference::VerifierConfig config(std::chrono::seconds budget) {
  inference::VerifierConfig cfg;
  cfg.solver = testing::solverConfig();
  cfg.budget = budget;
  return cfg;
}

const report::PropertyReport* onlyProperty(const report::ContractReport& r) {
  return r.properties.size() == 1 ? &r.properties[0] : nullptr;
}

bool verified(const report::ContractReport& r) {
  if (r.inputError || r.properties.empty()) return false;
  for (const auto& p : r.properties)
    if (p.verdict != inference::Verdict::Kind::Verified) return false;
  return true;
}

bool valid(const solver::Obligation& o) { return solver::check(o, testing::solverConfig()).isValid(); }

// Some survivor is equivalent to ∀u. wins[u] ⟹ hasWinner, checked both ways by the solver.
bool winnerSurvivor(const report::PropertyReport& p, std::string& which) {
  auto c = testing::compileCorpus("voting.dcn");
  if (!c.ok()) return false;
  const auto& ts = *c.system;
  auto var = [&](const std::string& n) {
    for (const auto& sv : ts.stateVars)
      if (sv.name == n) return sv.expr();
    throw std::runtime_error("no state variable " + n);
  };
  logic::Var u{"u", logic::Sort::uinteger(), logic::VarRole::Local, false};
  logic::Expr target =
      logic::mkForall({u}, logic::mkImplies(logic::mkSelect(var("wins"), {logic::mkVar(u)}), var("hasWinner")));
  auto candidates = inference::contractCandidates(*c.contract, ts, config(std::chrono::seconds(60)));
  for (const auto& text : p.survivors)
    for (const auto& cand : candidates) {
      if (cand.text() != text) continue;
      solver::Obligation there{"eq.there", {cand.closedForm}, target, {}};
      solver::Obligation back{"eq.back", {target}, cand.closedForm, {}};
      if (valid(there) && valid(back)) {
        which = text;
        return true;
      }
    }
  return false;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs `compile --dump-smt` twice per contract; true if every script matches.
bool identicalDumps(std::size_t& scripts, std::string& detail) {
  fs::path root = fs::temp_directory_path() / ("dcv-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::path a = root / "a", b = root / "b";
  for (const auto& dir : {a, b}) {
    fs::create_directories(dir);
    for (const char* name : kContracts) {
      std::string cmd = std::string(DCV_BINARY) + " compile --dump-smt " + dir.string() + " " +
                        (testing::corpusDir() / (std::string(name) + ".dcn")).string() + " >/dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        detail = std::string("compile failed on ") + name;
        return false;
      }
    }
  }
  scripts = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++scripts;
    fs::path twin = b / e.path().filename();
    if (!fs::exists(twin) || slurp(e.path()) != slurp(twin)) {
      detail = "differs: " + e.path().filename().string();
      return false;
    }
  }
  std::size_t other = std::distance(fs::directory_iterator(b), fs::directory_iterator{});
  fs::remove_all(root);
  if (other != scripts || scripts == 0) {
    detail = "script count mismatch";
    return false;
  }
  return true;
}

} // namespace

int main() {
  // Criterion 3 first: its reports feed criteria 1 and 2.
  std::map<std::string, report::ContractReport> corpus;
  for (const char* name : kContracts)
    corpus[name] = report::verifyFile(testing::corpusDir() / (std::string(name) + ".dcn"), config(std::chrono::hours(1)));

  {
    const auto& r = corpus["voting"];
    const auto* p = onlyProperty(r);
    std::string which;
    bool ok = verified(r) && p && p->seconds <= 60.0 && winnerSurvivor(*p, which);
    line(1, ok,
         "voting verified in " + secs(r.seconds) + (ok ? ", survivor equivalent to ∀u. wins[u] ⟹ hasWinner: " + which
                                                       : ", no equivalent survivor or too slow"));
  }
  {
    bool ok = true;
    std::string what;
    for (const char* name : {"voting", "auction"}) {
      const auto& r = corpus[name];
      const auto* p = onlyProperty(r);
      bool refutedSeen = false, survivorSeen = false;
      if (p)
        for (const auto& t : p->trace) {
          refutedSeen |= t.rfind("refuted", 0) == 0;
          survivorSeen |= t.rfind("survivor:", 0) == 0;
        }
      double limit = std::string(name) == "auction" ? 1800.0 : 3600.0;
      bool here = verified(r) && p && !p->plainInduction && p->refuted > 0 && !p->survivors.empty() && refutedSeen &&
                  survivorSeen && r.seconds <= limit;
      ok &= here;
      what += std::string(name) + (here ? " inferred" : " FAILED") + " (" + secs(r.seconds) +
              (p ? ", " + std::to_string(p->refuted) + " refuted, " + std::to_string(p->survivors.size()) + " survivors"
                 : "") +
              ") ";
    }
    line(2, ok, "plain induction fails, Houdini succeeds: " + what);
  }
  {
    std::size_t n = 0;
    double slowest = 0;
    std::string failed;
    for (const auto& [name, r] : corpus) {
      if (verified(r)) ++n;
      else failed += " " + name + "=" + r.verdict();
      slowest = std::max(slowest, r.seconds);
    }
    line(3, n == 7, std::to_string(n) + "/7 corpus contracts verified, slowest " + secs(slowest) + failed);
  }
  {
    auto t = Clock::now();
    testing::FiniteVoting v;
    testing::Comparison c;
    if (v.ok()) c = testing::compareTransitions(*v.compiled.system, v, v.states());
    double s = since(t);
    bool ok = v.ok() && c.states == v.states() && c.mismatches == 0 && c.undetermined == 0 && s <= 300.0;
    line(4, ok,
         "finite voting: " + std::to_string(c.states) + " states, " + std::to_string(c.pairs) + " transition pairs, " +
             std::to_string(c.mismatches) + " mismatches, " + secs(s));
  }
  {
    std::size_t unknown = 0, verifiedMutants = 0;
    std::string odd;
    for (const auto& e : fs::directory_iterator(testing::corpusDir() / "mutants")) {
      auto r = report::verifyFile(e.path(), config(std::chrono::hours(1)));
      if (verified(r)) ++verifiedMutants, odd += " verified:" + r.contract;
      else if (!r.inputError && !r.solverError() && r.verdict() == "unknown") ++unknown;
      else odd += " " + r.contract + "=" + r.verdict();
    }
    // Interpreter search on 3 voters, 2 proposals, quorum 2, and on 4 voters.
    auto reach = [](int voters) {
      auto c = testing::compileCorpus("mutants/voting_no_winner_guard.dcn");
      std::vector<std::int64_t> addrs;
      for (int v = 0; v < voters; ++v) addrs.push_back(v);
      testing::Domain dom{{{frontend::ColumnType::Address, addrs}, {frontend::ColumnType::UInt, {0, 1}}}};
      testing::Interpreter in(*c.contract, dom);
      testing::State init;
      for (auto a : addrs) in.write(init, "isVoter", {a, 1});
      in.write(init, "quorumSize", {2});
      return testing::bfs(in, init, 16, [&](const testing::State& s) { return in.violates(s, "inconsistency"); });
    };
    testing::Search three = reach(3), four = reach(4);
    bool ok = unknown == 7 && verifiedMutants == 0 && three.found;
    line(5, ok,
         std::to_string(unknown) + "/7 mutants unknown, " + std::to_string(verifiedMutants) + " verified" + odd +
             "; two winners with 3 voters: " +
             (three.found ? "reached in " + std::to_string(three.path.size()) + " steps"
                          : "unreachable (" + std::to_string(three.explored) + " states, exhaustive)") +
             "; with 4 voters: " +
             (four.found ? "reached in " + std::to_string(four.path.size()) + " steps" : "unreachable"));
  }
  {
    auto toys = testing::toys::handWrittenToys();
    std::size_t agree = 0;
    for (const auto& t : toys) {
      unsigned expected = testing::toys::bruteForceHoudini(t);
      auto cfg = config(std::chrono::seconds(300));
      if (t.candidates.size() <= 4 && testing::toys::houdini(t, true, cfg) == expected &&
          testing::toys::houdini(t, false, cfg) == expected)
        ++agree;
    }
    line(6, agree == toys.size() && agree >= 3,
         std::to_string(agree) + "/" + std::to_string(toys.size()) + " toy systems match brute-force Houdini");
  }
  {
    bool ok = true;
    std::string what;
    for (const char* mode : {"sat", "unknown", "garbage", "timeout"}) {
      double worst = 0;
      for (const char* name : {"voting", "wallet"}) {
        inference::VerifierConfig cfg = config(std::chrono::seconds(60));
        cfg.solver = testing::stubConfig(mode, std::chrono::seconds(1));
        auto r = report::verifyFile(testing::corpusDir() / (std::string(name) + ".dcn"), cfg);
        bool any = false;
        for (const auto& p : r.properties) any |= p.verdict == inference::Verdict::Kind::Verified;
        ok &= !any && r.seconds < 10.0;
        worst = std::max(worst, r.seconds);
        if (any) what += std::string("VERIFIED under ") + mode + " ";
      }
      what += std::string(mode) + " " + secs(worst) + " ";
    }
    line(7, ok, "stub solvers never verify; slowest run per mode: " + what);
  }
  {
    std::size_t scripts = 0;
    std::string detail;
    bool ok = identicalDumps(scripts, detail);
    line(8, ok, ok ? std::to_string(scripts) + " dumped scripts byte-identical across two runs" : detail);
  }
  return failures == 0 ? 0 : 1;
}
