#include "toys.hpp"

#include "dcv/logic/eval.hpp"

namespace dcv::testing::toys {

using namespace dcv::logic;
using namespace dcv::inference;

namespace {

const char* kNames[] = {"x", "y", "z"};

StateVar boolVar(const char* n) { return StateVar{n, Sort::boolean(), n, "b"}; }

Env stateEnv(int bits, bool primed) {
  Env env;
  for (int i = 0; i < 3; ++i) env[std::string(kNames[i]) + (primed ? "'" : "")] = Value::boolean(bits >> i & 1);
  return env;
}

bool holds(const Expr& e, const Env& env) { return evaluate(e, env).asBool(); }

} // namespace

Toy makeToy(std::vector<Expr> next, Expr init, Expr prop, std::vector<Expr> candidates) {
  Toy t;
  for (const char* n : kNames) t.ts.stateVars.push_back(boolVar(n));
  Transition step;
  step.name = "step";
  step.params = {Var{"p", Sort::boolean(), VarRole::Param, false}};
  std::vector<Expr> eqs;
  for (std::size_t i = 0; i < 3; ++i) eqs.push_back(mkEq(t.ts.stateVars[i].expr(true), next[i]));
  step.formula = mkAnd(eqs);
  step.guard = mkTrue();
  t.ts.transitions.push_back(step);
  t.ts.init = init;
  t.ts.initDefaults = mkTrue();
  Property p{"prop", prop, 0};
  t.ts.properties.push_back(p);
  t.prop = prop;
  t.candidates = std::move(candidates);
  return t;
}

std::vector<Expr> atoms(const Toy& t) {
  std::vector<Expr> a;
  for (const auto& sv : t.ts.stateVars) a.push_back(sv.expr());
  return a;
}

// S (a bit mask over the candidates) holds initially and is preserved by
// every step from a state satisfying S and the property.
bool inductive(const Toy& t, unsigned S) {
  auto all = [&](const Env& env) {
    for (std::size_t i = 0; i < t.candidates.size(); ++i)
      if ((S >> i & 1) && !holds(t.candidates[i], env)) return false;
    return true;
  };
  for (int s = 0; s < 8; ++s) {
    Env now = stateEnv(s, false);
    if (holds(t.ts.init, now) && !all(now)) return false;
    if (!all(now) || !holds(t.prop, now)) continue;
    for (int s2 = 0; s2 < 8; ++s2)
      for (int p = 0; p < 2; ++p) {
        Env pair = now;
        for (const auto& [k, v] : stateEnv(s2, true)) pair[k] = v;
        pair["p"] = Value::boolean(p);
        pair["event"] = Value::integer(0);
        if (holds(t.ts.tr(), pair) && !all(stateEnv(s2, false))) return false;
      }
  }
  return true;
}

// The inductive subsets are closed under union, so the greatest one is
// the union of all of them.
unsigned bruteForceHoudini(const Toy& t) {
  unsigned best = 0;
  for (unsigned S = 0; S < (1u << t.candidates.size()); ++S)
    if (inductive(t, S)) best |= S;
  return best;
}

unsigned houdini(const Toy& t, bool batched, VerifierConfig cfg) {
  cfg.batched = batched;
  Stats stats;
  SolverSession session(cfg, stats);
  std::vector<Candidate> C;
  for (const auto& e : t.candidates) C.push_back(plainCandidate(e));
  HoudiniResult h = findInductiveInvariant(C, t.ts, t.prop, session);
  unsigned mask = 0;
  for (auto i : h.survivors) mask |= 1u << i;
  return mask;
}

std::vector<Toy> handWrittenToys() {
  Var xv{"x", Sort::boolean(), VarRole::State, false}, yv{"y", Sort::boolean(), VarRole::State, false},
      zv{"z", Sort::boolean(), VarRole::State, false};
  Expr x = mkVar(xv), y = mkVar(yv), z = mkVar(zv), p = mkVar(Var{"p", Sort::boolean(), VarRole::Param, false});
  std::vector<Toy> toys;
  // Shift register: a one enters x and moves right.
  toys.push_back(makeToy({mkTrue(), x, y}, mkAnd({mkNot(x), mkNot(y), mkNot(z)}), mkTrue(),
                         {mkImplies(y, x), mkImplies(z, y), mkNot(x), mkImplies(z, x)}));
  // Toggle: x and y flip together.
  toys.push_back(makeToy({mkNot(x), mkNot(y), z}, mkAnd({x, mkNot(y), mkNot(z)}), mkNot(z),
                         {mkXor(x, y), x, mkImplies(y, x), mkNot(z)}));
  // Lock: p chooses who enters; a holder releases the lock.
  toys.push_back(makeToy({mkIte(z, mkFalse(), p), mkIte(z, mkFalse(), mkNot(p)), mkNot(z)},
                         mkAnd({mkNot(x), mkNot(y), mkNot(z)}), mkNot(mkAnd(x, y)),
                         {mkImplies(x, z), mkImplies(y, z), mkNot(z), mkImplies(z, mkOr(x, y))}));
  // Counter modulo 4 on (x, y); z records having passed 3.
  toys.push_back(makeToy({mkNot(x), mkXor(x, y), mkOr(z, mkAnd(x, y))}, mkAnd({mkNot(x), mkNot(y), mkNot(z)}),
                         mkTrue(), {mkNot(z), mkImplies(mkAnd(x, y), z), mkImplies(mkNot(z), mkNot(mkAnd(x, y))), y}));
  return toys;
}

} // namespace dcv::testing::toys
