#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dcv/inference/candidates.hpp"
#include "dcv/inference/predicates.hpp"
#include "dcv/inference/verify.hpp"
#include "dcv/logic/eval.hpp"
#include "support/bridge.hpp"
#include "support/toys.hpp"

namespace dcv::inference {
namespace {

using namespace dcv::logic;
using namespace dcv::testing::toys;

std::vector<std::string> texts(const std::vector<Predicate>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(p.text());
  return out;
}

bool has(const std::vector<std::string>& xs, const std::string& x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

VerifierConfig config() {
  VerifierConfig cfg;
  cfg.solver = testing::solverConfig();
  cfg.budget = std::chrono::seconds(300);
  return cfg;
}

class Voting : public ::testing::Test {
protected:
  void SetUp() override {
    c = testing::compileCorpus("voting.dcn");
    ASSERT_TRUE(c.ok());
    gamma = mkStateVars(*c.contract);
  }
  const Candidate& find(const std::vector<Candidate>& C, const std::string& text) {
    auto it = std::find_if(C.begin(), C.end(), [&](const Candidate& x) { return x.text() == text; });
    if (it == C.end()) throw std::runtime_error("no candidate " + text);
    return *it;
  }
  compiler::Compiled c;
  StateSpace gamma;
};

TEST_F(Voting, GuardLiteralsBecomePredicates) {
  auto p0 = texts(extractPredicates(*c.contract, gamma, 0));
  EXPECT_TRUE(has(p0, "¬hasWinner"));
  EXPECT_TRUE(has(p0, "¬voted[a]"));
  EXPECT_TRUE(has(p0, "isVoter[a]"));
  // The pair sharing the sender.
  EXPECT_TRUE(has(p0, "isVoter[a] ∧ ¬voted[a]"));
  // Nothing mentions the transaction parameters.
  for (const auto& p : extractPredicates(*c.contract, gamma, 0))
    for (const auto& v : freeVars(p.formula)) EXPECT_NE(v.role, VarRole::Param) << p.text();
}

TEST_F(Voting, DependentRulesContributePredicates) {
  auto all = texts(extractAllPredicates(*c.contract, gamma));
  EXPECT_TRUE(has(all, "wins[u]"));
  ExtractOptions own;
  own.includeDependents = false;
  EXPECT_FALSE(has(texts(extractAllPredicates(*c.contract, gamma, own)), "wins[u]"));
}

TEST_F(Voting, CandidateCountMatchesTheTwoPatterns) {
  auto P = extractAllPredicates(*c.contract, gamma);
  std::size_t n = P.size();
  // Pattern 1: every signed predicate; pattern 2: ordered pairs of signed
  // predicates over different predicates.
  EXPECT_EQ(generateCandidates(P, c.system->initDefaults).size(), 2 * n + (2 * n) * (2 * n - 2));
  CandidateOptions one;
  one.pattern2 = false;
  EXPECT_EQ(generateCandidates(P, c.system->initDefaults, one).size(), 2 * n);
  CandidateOptions positive;
  positive.polarity = false;
  EXPECT_LE(generateCandidates(P, c.system->initDefaults, positive).size(), n + n * (n - 1));
}

TEST_F(Voting, WinnerImpliesFlagSurvivesAndItsConverseIsRefuted) {
  VerifierConfig cfg = config();
  Stats stats;
  SolverSession session(cfg, stats);
  auto C = contractCandidates(*c.contract, *c.system, cfg);
  const Expr& prop = c.system->properties[0].formula;
  HoudiniResult h = findInductiveInvariant(C, *c.system, prop, session);

  std::vector<std::string> survivors;
  for (auto i : h.survivors) survivors.push_back(C[i].text());
  EXPECT_TRUE(has(survivors, "∀u:uint. ¬init ∧ wins[u] ⟹ hasWinner"));
  EXPECT_FALSE(h.refuted.empty());

  std::vector<Candidate> S;
  for (auto i : h.survivors) S.push_back(C[i]);
  EXPECT_FALSE(refuteInvariant(find(C, "∀u:uint. ¬init ∧ wins[u] ⟹ hasWinner"), S, *c.system, prop, session));
  EXPECT_TRUE(refuteInvariant(find(C, "∀u:uint. ¬init ⟹ ¬wins[u]"), S, *c.system, prop, session));
}

TEST_F(Voting, EmptyCandidateSetHasEmptyResult) {
  VerifierConfig cfg = config();
  Stats stats;
  SolverSession session(cfg, stats);
  HoudiniResult h = findInductiveInvariant({}, *c.system, c.system->properties[0].formula, session);
  EXPECT_TRUE(h.survivors.empty());
  EXPECT_TRUE(h.refuted.empty());
}

TEST_F(Voting, PlainInductionFailsAndInferenceSucceeds) {
  Verdict v = verifyProperty(*c.contract, *c.system, c.system->properties[0], config());
  ASSERT_TRUE(v.verified()) << toString(v.reason) << " " << v.detail;
  EXPECT_FALSE(v.plainInduction);
  EXPECT_FALSE(v.refuted.empty());
  EXPECT_FALSE(v.survivors.empty());
}

TEST(Houdini, MatchesBruteForceOnHandWrittenSystems) {
  int checked = 0;
  for (const auto& t : handWrittenToys()) {
    unsigned expected = bruteForceHoudini(t);
    EXPECT_TRUE(inductive(t, expected));
    EXPECT_EQ(houdini(t, true, config()), expected) << "toy " << checked;
    EXPECT_EQ(houdini(t, false, config()), expected) << "toy " << checked;
    ++checked;
  }
  EXPECT_GE(checked, 3);
}

TEST(Houdini, MatchesBruteForceOnRandomSystems) {
  int nontrivial = 0;
  for (unsigned seed = 0; seed < 25; ++seed) {
    BoolGen g(seed);
    Toy shape = makeToy({mkTrue(), mkTrue(), mkTrue()}, mkTrue(), mkTrue(), {});
    auto a = atoms(shape);
    auto withParam = a;
    withParam.push_back(mkVar(Var{"p", Sort::boolean(), VarRole::Param, false}));
    std::vector<Expr> C;
    for (int i = 0; i < 4; ++i) C.push_back(g.gen(a, 2));
    Toy t = makeToy({g.gen(withParam, 2), g.gen(withParam, 2), g.gen(withParam, 2)}, g.gen(a, 2), g.gen(a, 1), C);
    unsigned expected = bruteForceHoudini(t);
    EXPECT_TRUE(inductive(t, expected));
    EXPECT_EQ(houdini(t, true, config()), expected) << "seed " << seed;
    if (expected != 0 && expected != 15) ++nontrivial;
  }
  EXPECT_GT(nontrivial, 0);
}

// Adding candidates never shrinks the result.
TEST(Houdini, MonotoneInTheCandidateSet) {
  for (unsigned seed = 100; seed < 110; ++seed) {
    BoolGen g(seed);
    Toy shape = makeToy({mkTrue(), mkTrue(), mkTrue()}, mkTrue(), mkTrue(), {});
    auto a = atoms(shape);
    std::vector<Expr> C;
    for (int i = 0; i < 4; ++i) C.push_back(g.gen(a, 2));
    Toy big = makeToy({g.gen(a, 2), g.gen(a, 2), g.gen(a, 2)}, g.gen(a, 2), mkTrue(), C);
    Toy small = big;
    small.candidates.resize(2);
    unsigned s = houdini(small, true, config()), b = houdini(big, true, config());
    EXPECT_EQ(s & ~b & 3u, 0u) << "seed " << seed;
  }
}

} // namespace
} // namespace dcv::inference
