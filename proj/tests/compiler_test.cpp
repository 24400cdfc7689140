#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

#include "dcv/compiler/compile.hpp"
#include "dcv/logic/eval.hpp"
#include "support/bridge.hpp"
#include "support/interpreter.hpp"

namespace dcv::compiler {
namespace {

using namespace dcv::logic;
namespace fe = dcv::frontend;

bool containsSubterm(const Expr& e, const Expr& sub) {
  if (e == sub) return true;
  return std::any_of(e.kids().begin(), e.kids().end(), [&](const Expr& k) { return containsSubterm(k, sub); });
}

std::vector<std::string> corpusFiles() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(testing::corpusDir()))
    if (e.path().extension() == ".dcn") out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

class Voting : public ::testing::Test {
protected:
  void SetUp() override {
    c = testing::compileCorpus("voting.dcn");
    ASSERT_TRUE(c.ok());
  }
  Expr var(const std::string& n, bool primed = false) const {
    for (const auto& sv : c.system->stateVars)
      if (sv.name == n) return sv.expr(primed);
    ADD_FAILURE() << "no state variable " << n;
    return mkTrue();
  }
  Compiled c;
};

TEST_F(Voting, OneTransitionWithProposalAndSender) {
  ASSERT_EQ(c.system->transitions.size(), 1u);
  const auto& t = c.system->transitions[0];
  EXPECT_EQ(t.name, "vote");
  ASSERT_EQ(t.params.size(), 2u);
  EXPECT_EQ(t.params[0].name, "p");
  EXPECT_EQ(t.params[0].sort, Sort::uinteger());
  EXPECT_EQ(t.params[1].name, "sender");
  EXPECT_EQ(t.params[1].sort, Sort::address());
  std::set<std::string> writes(t.writes.begin(), t.writes.end());
  EXPECT_EQ(writes, (std::set<std::string>{"vote", "votes", "wins", "hasWinner", "winningProposal", "voted"}));
}

TEST_F(Voting, CountAggregateIsIncremental) {
  const auto& t = c.system->transitions[0];
  Expr p = mkVar(t.params[0]);
  Expr votes = var("votes");
  Expr expected = mkEq(var("votes", true), mkStore(votes, {p}, mkAdd(mkSelect(votes, {p}), mkInt(1))));
  EXPECT_TRUE(containsSubterm(expandNamed(t.formula), expected)) << toString(t.formula);
}

TEST_F(Voting, InitialStatesZeroEverythingButTheInitRelation) {
  auto parts = conjuncts(c.system->init);
  auto has = [&](const Expr& e) { return std::find(parts.begin(), parts.end(), e) != parts.end(); };
  EXPECT_TRUE(has(mkEq(var("votes"), mkConstMap(Sort::map({Sort::uinteger()}, Sort::uinteger()), mkInt(0)))));
  EXPECT_TRUE(has(mkNot(var("hasWinner"))));
  VarSet fv = freeVars(c.system->init);
  // isVoter is annotated `.init`; quorumSize is never written.
  EXPECT_FALSE(fv.count(var("isVoter").var()));
  EXPECT_TRUE(has(mkGe(var("quorumSize"), mkInt(0))));
  for (const auto& part : conjuncts(c.system->initDefaults)) EXPECT_TRUE(has(part)) << toString(part);
}

TEST_F(Voting, UnwrittenStateIsFramed) {
  const auto& t = c.system->transitions[0];
  auto parts = conjuncts(t.formula);
  for (const char* n : {"quorumSize", "isVoter", "inconsistency"})
    EXPECT_NE(std::find(parts.begin(), parts.end(), mkEq(var(n, true), var(n))), parts.end()) << n;
}

TEST_F(Voting, ViolationQueryBecomesNegatedProperty) {
  ASSERT_EQ(c.system->properties.size(), 1u);
  const auto& p = c.system->properties[0];
  EXPECT_EQ(p.name, "inconsistency");
  EXPECT_EQ(p.rule, 6u);
  // The property fails exactly on states with two winners.
  FiniteDomain dom;
  dom.values[SortKind::UInt] = {0, 1, 2};
  for (int mask = 0; mask < 8; ++mask) {
    std::map<std::vector<std::int64_t>, Value> wins;
    for (int i = 0; i < 3; ++i) wins[{i}] = Value::boolean(mask >> i & 1);
    Env env{{"wins", Value::map(wins, Value::boolean(false))}};
    bool two = __builtin_popcount(mask) >= 2;
    EXPECT_EQ(evaluate(p.formula, env, dom).asBool(), !two) << mask;
  }
}

// With the transaction guard false, the only successor is the state itself.
TEST_F(Voting, FalseGuardStutters) {
  testing::Domain keys{{{fe::ColumnType::Address, {0, 1}}, {fe::ColumnType::UInt, {0, 1}}}};
  testing::Interpreter in(*c.contract, keys);
  StateSpace gamma = mkStateVars(*c.contract);
  testing::State s;
  in.write(s, "hasWinner", {1});
  in.write(s, "isVoter", {0, 1});
  in.write(s, "quorumSize", {2});
  Env env = testing::toEnv(in, gamma, s, false, keys);
  for (const auto& [k, v] : testing::toEnv(in, gamma, s, true, keys)) env[k] = v;
  const auto& t = c.system->transitions[0];
  env["p"] = Value::integer(1);
  env["sender"] = Value::integer(0);
  FiniteDomain fd = testing::finiteDomain(keys);
  EXPECT_FALSE(evaluate(t.guard, env, fd).asBool());
  EXPECT_TRUE(evaluate(t.formula, env, fd).asBool());
  // Any change is rejected.
  env["votes'"] = env["votes'"].write({1}, Value::integer(1));
  EXPECT_FALSE(evaluate(t.formula, env, fd).asBool());
}

TEST(Compile, OneTransitionPerHandlerRule) {
  auto c = compileSource(R"(
.decl recv_inc(n: uint)
.decl recv_reset()
.decl *total(t: uint)
.decl bad(t: uint)
.violation bad
total(s) :- recv_inc(n), total(t), s = t + n.
total(0) :- recv_reset().
bad(t) :- total(t), t > 100.
)");
  ASSERT_TRUE(c.ok()) << (c.diagnostics.empty() ? "" : c.diagnostics[0].message);
  ASSERT_EQ(c.system->transitions.size(), 2u);
  EXPECT_EQ(c.system->transitions[0].name, "inc");
  EXPECT_EQ(c.system->transitions[1].name, "reset");
  EXPECT_EQ(c.system->transitions[0].rule, 0u);
  EXPECT_EQ(c.system->transitions[1].rule, 1u);
  EXPECT_TRUE(c.system->transitions[1].params.empty());
}

TEST(Compile, DoubleWriteInOneTransactionIsRejected) {
  auto c = compileSource(R"(
.decl recv_go(n: uint)
.decl *a(x: uint)
.decl *b(x: uint)
.decl *c(x: uint)
.decl *last(x: uint)
.decl bad(x: uint)
.violation bad
a(n) :- recv_go(n).
b(x) :- a(x).
c(x) :- a(x).
last(x) :- b(x).
last(x) :- c(x).
bad(x) :- last(x), x > 5.
)");
  EXPECT_FALSE(c.ok());
  EXPECT_TRUE(std::any_of(c.diagnostics.begin(), c.diagnostics.end(), [](const fe::Diagnostic& d) {
    return d.message.find("written more than once") != std::string::npos;
  }));
}

TEST(Compile, CorpusSystemsAreWellFormed) {
  for (const auto& f : corpusFiles()) {
    auto c = testing::compileCorpus(f);
    ASSERT_TRUE(c.ok()) << f;
    EXPECT_EQ(c.system->checkWellFormed(), std::nullopt) << f;
    EXPECT_EQ(c.system->properties.size(), c.contract->violationRules().size()) << f;
    EXPECT_EQ(c.system->transitions.size(), c.contract->transactionRules().size()) << f;
    for (const auto& t : c.system->transitions)
      for (const auto& v : freeVars(t.formula)) {
        bool param = std::find(t.params.begin(), t.params.end(), v) != t.params.end();
        EXPECT_TRUE(v.role == VarRole::State || (v.role == VarRole::Param && param)) << f << " " << v.key();
      }
  }
}

TEST(Compile, DeterministicOutput) {
  for (const auto& f : corpusFiles()) {
    auto a = testing::compileCorpus(f), b = testing::compileCorpus(f);
    ASSERT_TRUE(a.ok() && b.ok()) << f;
    EXPECT_EQ(dump(*a.system), dump(*b.system)) << f;
  }
}

} // namespace
} // namespace dcv::compiler
