#include "dcv/inference/predicates.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "dcv/compiler/encode.hpp"

namespace dcv::inference {

using namespace logic;
namespace fe = frontend;

namespace {

bool isLocal(const Var& v) { return v.role == VarRole::Local; }

bool mentions(const Expr& e, VarRole role) {
  for (const auto& v : freeVars(e))
    if (v.role == role) return true;
  return false;
}

std::set<Var> localsOf(const Expr& e) {
  std::set<Var> out;
  for (const auto& v : freeVars(e))
    if (isLocal(v)) out.insert(v);
  return out;
}

bool hasConstant(const Expr& e) {
  if (e.op() == Op::BoolConst || e.op() == Op::IntConst) return true;
  // ¬x and bare boolean reads compare against a constant in the source.
  if (e.sort().isBool() && (e.op() == Op::Select || e.op() == Op::Var || e.op() == Op::Not)) return true;
  return std::any_of(e.kids().begin(), e.kids().end(), hasConstant);
}

void firstOccurrence(const Expr& e, std::vector<Var>& order, std::set<Var>& bound) {
  switch (e.op()) {
  case Op::Var:
    if (isLocal(e.var()) && !bound.count(e.var()) &&
        std::find(order.begin(), order.end(), e.var()) == order.end())
      order.push_back(e.var());
    return;
  case Op::Forall:
  case Op::Exists: {
    std::set<Var> inner = bound;
    inner.insert(e.bound().begin(), e.bound().end());
    firstOccurrence(e.kid(0), order, inner);
    return;
  }
  default:
    for (const auto& k : e.kids()) firstOccurrence(k, order, bound);
  }
}

std::string prefixFor(const Sort& s) {
  switch (s.kind()) {
  case SortKind::UInt: return "u";
  case SortKind::Addr: return "a";
  case SortKind::Int: return "i";
  case SortKind::Bool: return "b";
  case SortKind::Map: break;
  }
  return "m";
}

// Rules reachable from transaction rules through insertions.
std::vector<std::size_t> dependentClosure(const fe::ValidatedContract& c) {
  std::set<std::size_t> seen;
  std::vector<std::size_t> order;
  std::function<void(std::size_t)> visit = [&](std::size_t r) {
    for (std::size_t d : c.dependentRules(r))
      if (seen.insert(d).second) {
        order.push_back(d);
        visit(d);
      }
  };
  for (std::size_t t : c.transactionRules()) visit(t);
  return order;
}

} // namespace

Expr simplifyPredicate(const Expr& e) {
  std::vector<Expr> cs = conjuncts(e);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < cs.size() && !changed; ++i) {
      const Expr& c = cs[i];
      std::optional<std::pair<Var, Expr>> def;
      if (c.op() == Op::Eq) {
        for (int side = 0; side < 2 && !def; ++side) {
          const Expr& x = c.kid(side);
          const Expr& t = c.kid(1 - side);
          if (x.op() == Op::Var && isLocal(x.var()) && !freeVars(t).count(x.var())) def.emplace(x.var(), t);
        }
      } else if (c.op() == Op::Var && isLocal(c.var())) {
        def.emplace(c.var(), mkTrue());
      } else if (c.op() == Op::Not && c.kid(0).op() == Op::Var && isLocal(c.kid(0).var())) {
        def.emplace(c.kid(0).var(), mkFalse());
      }
      if (!def) continue;
      Substitution sigma{{def->first, def->second}};
      std::vector<Expr> next;
      for (std::size_t j = 0; j < cs.size(); ++j)
        if (j != i)
          for (const auto& k : conjuncts(substitute(cs[j], sigma))) next.push_back(k);
      cs = std::move(next);
      changed = true;
    }
  }
  std::sort(cs.begin(), cs.end(), [](const Expr& a, const Expr& b) { return toString(a) < toString(b); });
  return mkAnd(cs);
}

Predicate canonicalize(const Expr& e, std::size_t rule, std::vector<std::size_t> literals) {
  std::vector<Var> order;
  std::set<Var> bound;
  firstOccurrence(e, order, bound);
  std::map<std::string, int> perPrefix;
  Substitution sigma;
  Predicate p;
  for (const auto& v : order) {
    std::string pre = prefixFor(v.sort);
    int n = perPrefix[pre]++;
    Var fresh{n == 0 ? pre : pre + std::to_string(n), v.sort, VarRole::Local, false};
    sigma.emplace(v, mkVar(fresh));
    p.locals.push_back(fresh);
  }
  // Two-step renaming avoids clashes between old and new names.
  Substitution tmp, back;
  for (std::size_t i = 0; i < order.size(); ++i) {
    Var t{"#" + std::to_string(i), order[i].sort, VarRole::Local, false};
    tmp.emplace(order[i], mkVar(t));
    back.emplace(t, mkVar(p.locals[i]));
  }
  p.formula = substitute(substitute(e, tmp), back);
  p.rule = rule;
  p.literals = std::move(literals);
  return p;
}

std::vector<Predicate> extractPredicates(const fe::ValidatedContract& c, const StateSpace& gamma,
                                         std::size_t ri, const ExtractOptions& opts) {
  const fe::Rule& r = c.rules().at(ri);
  compiler::Encoder enc(c, gamma);
  compiler::Trigger tau = compiler::Trigger::check();
  if (const auto* trig = r.triggerLiteral()) {
    const auto& td = c.relation(trig->relation);
    tau.relation = trig->relation;
    for (std::size_t k = 0; k < trig->args.size(); ++k)
      tau.args.push_back(mkVar(Var{enc.names().fresh(td.columns[k].name), sortOf(td.columns[k].type),
                                   VarRole::Param, false}));
  }
  compiler::BodyEncoding body = enc.encodeRuleBody(ri, tau, compiler::BindMode::Explicit);

  // One raw predicate per body literal.
  std::map<std::size_t, std::vector<Expr>> byLiteral;
  for (std::size_t i = 0; i < body.atoms.size(); ++i) byLiteral[body.origin[i]].push_back(body.atoms[i]);
  struct Raw {
    std::size_t literal;
    Expr formula;
    std::set<Var> locals;
  };
  std::vector<Raw> raw;
  for (const auto& [lit, atoms] : byLiteral) {
    Expr f = mkAnd(atoms);
    if (mentions(f, VarRole::Param)) continue;
    raw.push_back({lit, f, localsOf(f)});
  }

  std::vector<Predicate> out;
  auto keep = [&](const Expr& f, std::vector<std::size_t> lits) {
    Expr s = simplifyPredicate(f);
    if (s.isTrue() || s.isFalse() || !mentions(s, VarRole::State)) return;
    Predicate p = canonicalize(s, ri, std::move(lits));
    for (const auto& q : out)
      if (q.formula == p.formula) return;
    out.push_back(std::move(p));
  };
  for (const auto& p : raw) {
    if (!mentions(p.formula, VarRole::State)) continue;
    if (opts.dropConstantFree && !hasConstant(p.formula)) continue;
    keep(p.formula, {p.literal});
  }
  for (const auto& p : raw) {
    if (!mentions(p.formula, VarRole::State)) continue;
    for (const auto& q : raw) {
      if (q.literal == p.literal) continue;
      bool shares = std::any_of(p.locals.begin(), p.locals.end(), [&](const Var& v) { return q.locals.count(v); });
      if (shares) keep(mkAnd(p.formula, q.formula), {p.literal, q.literal});
    }
  }
  return out;
}

std::vector<Predicate> extractAllPredicates(const fe::ValidatedContract& c, const StateSpace& gamma,
                                            const ExtractOptions& opts) {
  std::vector<std::size_t> rules = c.transactionRules();
  if (opts.includeDependents)
    for (std::size_t d : dependentClosure(c)) rules.push_back(d);
  std::vector<Predicate> out;
  for (std::size_t r : rules)
    for (auto& p : extractPredicates(c, gamma, r, opts)) {
      bool dup = std::any_of(out.begin(), out.end(), [&](const Predicate& q) { return q.formula == p.formula; });
      if (!dup) out.push_back(std::move(p));
    }
  return out;
}

} // namespace dcv::inference
