#include "dcv/solver/ground.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

namespace dcv::solver {

using namespace logic;

namespace {

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

/// Insertion-ordered set of terms.
class TermList {
public:
  void add(const Expr& e) {
    if (seen_.insert(e).second) items_.push_back(e);
  }
  const std::vector<Expr>& items() const { return items_; }
  bool empty() const { return items_.empty(); }

private:
  std::vector<Expr> items_;
  std::unordered_set<Expr, ExprHash> seen_;
};

bool hasQuantifier(const Expr& e) {
  if (e.op() == Op::Forall || e.op() == Op::Exists) return true;
  return std::any_of(e.kids().begin(), e.kids().end(), hasQuantifier);
}

/// State relations a map-valued term reads from.
void roots(const Expr& m, std::vector<std::string>& out) {
  switch (m.op()) {
  case Op::Var:
    if (m.var().role == VarRole::State) out.push_back(m.var().name);
    return;
  case Op::Store:
  case Op::Named: roots(m.kid(0), out); return;
  case Op::Ite:
    roots(m.kid(1), out);
    roots(m.kid(2), out);
    return;
  default: return;
  }
}

std::size_t keyCount(const Expr& e) {
  return e.op() == Op::Select ? e.kids().size() - 1 : e.kids().size() - 2;
}

class Grounder {
public:
  Grounder(const GroundOptions& opts, GroundStats& stats) : opts_(opts), stats_(stats) {}

  /// With `inst` false only skolemization happens and universals are kept.
  Expr rewrite(const Expr& e, bool pol, bool inst, int depth) {
    if (!hasQuantifier(e)) return e;
    switch (e.op()) {
    case Op::Not: return mkNot(rewrite(e.kid(0), !pol, inst, depth));
    case Op::And:
    case Op::Or: {
      std::vector<Expr> ks;
      for (const auto& k : e.kids()) ks.push_back(rewrite(k, pol, inst, depth));
      return e.op() == Op::And ? mkAnd(ks) : mkOr(ks);
    }
    case Op::Implies: return mkImplies(rewrite(e.kid(0), !pol, inst, depth), rewrite(e.kid(1), pol, inst, depth));
    case Op::Named: return rewrite(e.kid(0), pol, inst, depth);
    case Op::Eq:
      if (e.kid(0).sort().isBool())
        return rewrite(mkAnd(mkImplies(e.kid(0), e.kid(1)), mkImplies(e.kid(1), e.kid(0))), pol, inst, depth);
      return e;
    case Op::Ne:
    case Op::Xor:
      if (e.kid(0).sort().isBool()) {
        const Expr &a = e.kid(0), &b = e.kid(1);
        return rewrite(mkAnd(mkOr(a, b), mkOr(mkNot(a), mkNot(b))), pol, inst, depth);
      }
      return e;
    case Op::Ite:
      if (e.sort().isBool()) {
        const Expr &c = e.kid(0), &t = e.kid(1), &f = e.kid(2);
        return rewrite(mkAnd(mkOr(mkNot(c), t), mkOr(c, f)), pol, inst, depth);
      }
      return e;
    case Op::Forall:
      if (!pol) return skolemize(e, pol, inst, depth);
      return inst ? instantiate(e, pol, depth) : e;
    case Op::Exists:
      if (pol) return skolemize(e, pol, inst, depth);
      return inst ? instantiate(e, pol, depth) : e;
    default:
      // A quantifier below a term-level operator; left to the solver.
      return e;
    }
  }

  void collect(const Expr& e) {
    switch (e.op()) {
    case Op::Forall:
    case Op::Exists: return;
    case Op::Var:
      if (!e.sort().isMap() && !e.sort().isBool()) pools_[e.sort()].add(e);
      return;
    case Op::Select:
    case Op::Store: {
      std::vector<Expr> keys(e.kids().begin() + 1, e.kids().begin() + 1 + keyCount(e));
      std::vector<std::string> rs;
      roots(e.kid(0), rs);
      for (const auto& r : rs) addTuple(r, keys);
      for (const auto& k : keys) pools_[k.sort()].add(k);
      break;
    }
    default: break;
    }
    for (const auto& k : e.kids()) collect(k);
  }

  const std::vector<std::vector<Expr>>& tuples(const std::string& relation) const {
    static const std::vector<std::vector<Expr>> none;
    auto it = tuples_.find(relation);
    return it == tuples_.end() ? none : it->second;
  }

private:
  void addTuple(const std::string& relation, const std::vector<Expr>& keys) {
    auto& seen = tupleSeen_[relation];
    std::string k;
    for (const auto& x : keys) k += toString(x) + "\x1f";
    if (seen.insert(k).second) tuples_[relation].push_back(keys);
  }

  Expr skolemize(const Expr& q, bool pol, bool inst, int depth) {
    Substitution sigma;
    for (const auto& v : q.bound()) {
      Var sk{"sk!" + std::to_string(stats_.skolems++), v.sort, VarRole::Param, false};
      sigma.emplace(v, mkVar(sk));
    }
    return rewrite(substitute(q.kid(0), sigma), pol, inst, depth);
  }

  void keyOccurrences(const Expr& e, const std::vector<Var>& bound, std::map<Var, TermList>& dom) const {
    if (e.op() == Op::Select || e.op() == Op::Store) {
      std::vector<std::string> rs;
      roots(e.kid(0), rs);
      std::size_t n = keyCount(e);
      for (std::size_t i = 0; i < n; ++i) {
        const Expr& key = e.kid(i + 1);
        if (key.op() != Op::Var || std::find(bound.begin(), bound.end(), key.var()) == bound.end()) continue;
        for (const auto& r : rs)
          for (const auto& t : tuples(r))
            if (t.size() == n) dom[key.var()].add(t[i]);
      }
    }
    for (const auto& k : e.kids()) keyOccurrences(k, bound, dom);
  }

  Expr instantiate(const Expr& q, bool pol, int depth) {
    ++stats_.universals;
    if (depth >= opts_.maxDepth) return mkBool(pol);
    const auto& bound = q.bound();
    std::map<Var, TermList> dom;
    keyOccurrences(q.kid(0), bound, dom);
    std::vector<std::vector<Expr>> choices;
    for (const auto& v : bound) {
      std::vector<Expr> c;
      if (auto it = dom.find(v); it != dom.end()) c = it->second.items();
      else if (v.sort.isBool()) c = {mkTrue(), mkFalse()};
      else if (auto p = pools_.find(v.sort); p != pools_.end()) c = p->second.items();
      if (c.empty()) return mkBool(pol);
      choices.push_back(std::move(c));
    }
    std::vector<Expr> instances;
    std::vector<std::size_t> idx(bound.size(), 0);
    while (true) {
      if (instances.size() == opts_.maxInstances) {
        stats_.truncated = true;
        break;
      }
      Substitution sigma;
      for (std::size_t i = 0; i < bound.size(); ++i) sigma.emplace(bound[i], choices[i][idx[i]]);
      instances.push_back(rewrite(substitute(q.kid(0), sigma), pol, true, depth + 1));
      std::size_t i = 0;
      while (i < idx.size() && ++idx[i] == choices[i].size()) idx[i++] = 0;
      if (i == idx.size()) break;
    }
    stats_.instances += instances.size();
    return pol ? mkAnd(instances) : mkOr(instances);
  }

  const GroundOptions& opts_;
  GroundStats& stats_;
  std::map<Sort, TermList> pools_;
  std::map<std::string, std::vector<std::vector<Expr>>> tuples_;
  std::map<std::string, std::set<std::string>> tupleSeen_;
};

} // namespace

Obligation ground(const Obligation& o, const GroundOptions& opts, GroundStats* stats) {
  GroundStats local;
  GroundStats& st = stats ? *stats : local;
  Grounder g(opts, st);

  std::vector<Expr> facts;
  for (const auto& a : o.assumptions) facts.push_back(g.rewrite(a, true, false, 0));
  facts.push_back(g.rewrite(mkNot(o.goal), true, false, 0));
  for (const auto& f : facts) g.collect(f);
  for (const auto& p : o.probes) g.collect(p);

  Obligation out;
  out.name = o.name;
  out.probes = o.probes;
  out.mapAxioms = false;
  for (const auto& f : facts) out.assumptions.push_back(g.rewrite(f, true, true, 0));
  out.goal = mkFalse();

  // Ground instances of the uint-map axioms, at every key tuple of the
  // grounded formula.
  GroundStats scratch;
  Grounder keys(opts, scratch);
  for (const auto& a : out.assumptions) keys.collect(a);
  std::vector<Expr> axioms;
  for (const auto& v : out.declarations()) {
    if (!v.sort.isMap() || v.sort.value().kind() != SortKind::UInt || v.role != VarRole::State) continue;
    for (const auto& t : keys.tuples(v.name))
      if (t.size() == v.sort.keys().size()) axioms.push_back(mkGe(mkSelect(mkVar(v), t), mkInt(0)));
  }
  out.assumptions.insert(out.assumptions.begin(), axioms.begin(), axioms.end());
  return out;
}

} // namespace dcv::solver
