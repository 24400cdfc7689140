#include "dcv/compiler/encode.hpp"

#include <algorithm>
#include <functional>

namespace dcv::compiler {

using namespace logic;
namespace fe = frontend;

std::string NameScope::fresh(const std::string& base) {
  if (used_.insert(base).second) return base;
  for (int i = 1;; ++i) {
    std::string n = base + "_" + std::to_string(i);
    if (used_.insert(n).second) return n;
  }
}

Encoder::Encoder(const fe::ValidatedContract& c, const StateSpace& gamma) : c_(c), gamma_(gamma) {
  resetScope();
}

void Encoder::resetScope() {
  names_ = NameScope();
  for (const auto& v : gamma_.vars()) names_.reserve(v.name);
  names_.reserve("event");
  names_.reserve("init");
  env_ = {};
}

void Encoder::error(fe::SourceLoc loc, std::string msg) {
  diags_.push_back({loc, fe::Severity::Error, std::move(msg)});
}

Expr Encoder::constant(const fe::Arg& a, const Sort& s) const {
  if (a.kind == fe::Arg::Kind::Bool || s.isBool()) return mkBool(a.value != 0);
  return mkInt(a.value, s.isIntegral() ? s : Sort::integer());
}

const Var& Encoder::envParam(std::string_view builtin) {
  bool sender = builtin == fe::kMsgSender;
  auto& slot = sender ? env_.sender : env_.value;
  if (!slot)
    slot = Var{names_.fresh(sender ? "sender" : "value"),
               sender ? Sort::address() : Sort::uinteger(), VarRole::Param, false};
  return *slot;
}

Expr Encoder::update(const std::string& rel, const std::vector<Expr>& args) const {
  const fe::RelationDecl& d = c_.relation(rel);
  const auto& vars = gamma_.of(rel);
  std::vector<Expr> eqs;
  if (d.singleton) {
    for (std::size_t i = 0; i < vars.size(); ++i) eqs.push_back(mkEq(vars[i].expr(true), args[i]));
  } else if (d.isMembership()) {
    eqs.push_back(mkEq(vars[0].expr(true), mkStore(vars[0].expr(), args, mkTrue())));
  } else {
    std::vector<Expr> keys;
    for (auto k : d.keyColumns()) keys.push_back(args[k]);
    auto vcols = d.valueColumns();
    for (std::size_t i = 0; i < vcols.size(); ++i)
      eqs.push_back(mkEq(vars[i].expr(true), mkStore(vars[i].expr(), keys, args[vcols[i]])));
  }
  return mkAnd(eqs);
}

Expr Encoder::frame(const std::string& rel) const {
  std::vector<Expr> eqs;
  for (const auto& v : gamma_.of(rel)) eqs.push_back(mkEq(v.expr(true), v.expr()));
  return mkAnd(eqs);
}

BodyEncoding Encoder::encodeRuleBody(std::size_t ri, const Trigger& tau, BindMode mode) {
  const fe::Rule& r = c_.rules().at(ri);
  BodyEncoding out;
  auto& bound = out.bindings;

  auto varSort = [&](const std::string& v) { return sortOf(c_.varType(ri, v)); };
  auto add = [&](const Expr& atom, std::size_t lit) {
    if (atom.isTrue()) return;
    out.atoms.push_back(atom);
    out.origin.push_back(lit);
  };
  auto newLocal = [&](const std::string& v) {
    bool wildcard = !v.empty() && v[0] == '_';
    Var x{names_.fresh(wildcard ? "w" : v), varSort(v), VarRole::Local, false};
    out.locals.push_back(x);
    Expr e = mkVar(x);
    bound.emplace(v, e);
    return e;
  };
  // Term of an argument; unbound variables become locals.
  auto term = [&](const fe::Arg& a, const Sort& s) {
    if (a.isConst()) return constant(a, s);
    auto it = bound.find(a.name);
    return it != bound.end() ? it->second : newLocal(a.name);
  };
  auto termOf = [&](const fe::Arg& a) {
    return term(a, a.isVar() ? varSort(a.name) : Sort::integer());
  };
  // Equate an argument with a term, binding the variable when allowed.
  auto unify = [&](const fe::Arg& a, const Expr& t, const Sort& colSort, std::size_t lit) {
    if (a.isConst()) {
      add(mkEq(constant(a, colSort), t), lit);
      return;
    }
    auto it = bound.find(a.name);
    if (it != bound.end()) {
      add(mkEq(it->second, t), lit);
      return;
    }
    if (mode == BindMode::Explicit) {
      add(mkEq(newLocal(a.name), t), lit);
      return;
    }
    bound.emplace(a.name, t);
    // A uint variable only takes non-negative values.
    if (varSort(a.name).kind() == SortKind::UInt && t.sort().kind() == SortKind::Int)
      add(mkGe(t, mkInt(0)), lit);
  };
  auto colSort = [&](const fe::RelationDecl& d, std::size_t i) { return sortOf(d.columns[i].type); };

  enum class Stage { Trigger, Builtin, State, Function, Aggregate, Condition };
  auto stageOf = [&](const fe::BodyLiteral& lit) {
    if (auto* l = std::get_if<fe::RelationalLit>(&lit)) {
      if (l->relation == tau.relation) return Stage::Trigger;
      if (fe::findBuiltin(l->relation)) return Stage::Builtin;
      return Stage::State;
    }
    if (std::holds_alternative<fe::FunctionLit>(lit)) return Stage::Function;
    if (std::holds_alternative<fe::AggregatorLit>(lit)) return Stage::Aggregate;
    return Stage::Condition;
  };

  // Lit1: literals of the trigger relation, including aggregator sources.
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    const fe::RelationalLit* l = nullptr;
    if (stageOf(r.body[i]) == Stage::Trigger) l = &std::get<fe::RelationalLit>(r.body[i]);
    if (auto* a = std::get_if<fe::AggregatorLit>(&r.body[i]))
      if (a->source.relation == tau.relation) l = &a->source;
    if (!l) continue;
    const auto& d = c_.relation(l->relation);
    for (std::size_t k = 0; k < l->args.size(); ++k) unify(l->args[k], tau.args.at(k), colSort(d, k), i);
  }

  // Environment literals.
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    if (stageOf(r.body[i]) != Stage::Builtin) continue;
    const auto& l = std::get<fe::RelationalLit>(r.body[i]);
    const Var& p = envParam(l.relation);
    unify(l.args.at(0), mkVar(p), p.sort, i);
  }

  // Lit2: state reads, in an order that binds keys before they are used.
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < r.body.size(); ++i)
    if (stageOf(r.body[i]) == Stage::State) pending.push_back(i);
  auto keysReady = [&](std::size_t i) {
    const auto& l = std::get<fe::RelationalLit>(r.body[i]);
    const auto& d = c_.relation(l.relation);
    for (auto k : d.keyColumns())
      if (l.args[k].isVar() && !bound.count(l.args[k].name)) return false;
    return true;
  };
  while (!pending.empty()) {
    auto it = std::find_if(pending.begin(), pending.end(), keysReady);
    if (it == pending.end()) {
      // No literal has all keys bound: quantify the first open key.
      const auto& l = std::get<fe::RelationalLit>(r.body[pending.front()]);
      for (auto k : c_.relation(l.relation).keyColumns())
        if (l.args[k].isVar() && !bound.count(l.args[k].name)) {
          newLocal(l.args[k].name);
          break;
        }
      continue;
    }
    std::size_t i = *it;
    pending.erase(it);
    const auto& l = std::get<fe::RelationalLit>(r.body[i]);
    const auto& d = c_.relation(l.relation);
    if (!gamma_.has(l.relation)) {
      // A handler literal outside its own transaction carries no state.
      for (std::size_t k = 0; k < l.args.size(); ++k)
        if (l.args[k].isVar() && !bound.count(l.args[k].name)) newLocal(l.args[k].name);
      continue;
    }
    const auto& vars = gamma_.of(l.relation);
    if (d.singleton) {
      for (std::size_t k = 0; k < l.args.size(); ++k) unify(l.args[k], vars[k].expr(), colSort(d, k), i);
      continue;
    }
    std::vector<Expr> keys;
    for (auto k : d.keyColumns()) keys.push_back(term(l.args[k], colSort(d, k)));
    if (d.isMembership()) {
      add(mkSelect(vars[0].expr(), keys), i);
      continue;
    }
    auto vcols = d.valueColumns();
    for (std::size_t v = 0; v < vcols.size(); ++v)
      unify(l.args[vcols[v]], mkSelect(vars[v].expr(), keys), colSort(d, vcols[v]), i);
  }

  // Functions, in binding order.
  std::vector<std::size_t> fns;
  for (std::size_t i = 0; i < r.body.size(); ++i)
    if (stageOf(r.body[i]) == Stage::Function) fns.push_back(i);
  auto ready = [&](const fe::Arg& a) { return a.isConst() || bound.count(a.name); };
  while (!fns.empty()) {
    auto it = std::find_if(fns.begin(), fns.end(), [&](std::size_t i) {
      const auto& f = std::get<fe::FunctionLit>(r.body[i]);
      return ready(f.lhs) && ready(f.rhs);
    });
    if (it == fns.end()) it = fns.begin(); // unbound operands become locals
    std::size_t i = *it;
    fns.erase(it);
    const auto& f = std::get<fe::FunctionLit>(r.body[i]);
    Expr a = termOf(f.lhs), b = termOf(f.rhs);
    Expr t;
    switch (f.op) {
    case fe::ArithOp::Add: t = mkAdd(a, b); break;
    case fe::ArithOp::Sub: t = mkSub(a, b); break;
    case fe::ArithOp::Mul: t = mkMul(a, b); break;
    case fe::ArithOp::Div: t = mkDiv(a, b); break;
    }
    unify(fe::Arg::var(f.out), t, varSort(f.out), i);
  }

  // Aggregators: incremental update of the head's stored aggregate.
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    auto* agg = std::get_if<fe::AggregatorLit>(&r.body[i]);
    if (!agg || agg->source.relation != tau.relation) continue;
    const auto& hd = c_.relation(r.head.relation);
    std::optional<std::size_t> col;
    for (std::size_t k = 0; k < r.head.args.size(); ++k)
      if (r.head.args[k].isVar() && r.head.args[k].name == agg->out) col = k;
    auto vcols = hd.valueColumns();
    auto vpos = col ? std::find(vcols.begin(), vcols.end(), *col) : vcols.end();
    if (!col || (!hd.singleton && vpos == vcols.end())) {
      error(agg->loc, "aggregate '" + agg->out + "' must be stored in a value column of '" +
                          r.head.relation + "'");
      continue;
    }
    const StateVar& hv = gamma_.of(r.head.relation)[hd.singleton ? *col : vpos - vcols.begin()];
    Expr cur = hv.expr();
    if (!hd.singleton) {
      std::vector<Expr> keys;
      for (auto k : hd.keyColumns()) keys.push_back(term(r.head.args[k], colSort(hd, k)));
      cur = mkSelect(cur, keys);
    }
    Expr next;
    if (agg->agg == fe::AggKind::Count) {
      next = mkAdd(cur, mkInt(1));
    } else {
      if (!agg->aggVar) {
        error(agg->loc, std::string(fe::toString(agg->agg)) + " needs an aggregated variable");
        continue;
      }
      Expr n = termOf(fe::Arg::var(*agg->aggVar));
      switch (agg->agg) {
      case fe::AggKind::Max: next = mkIte(mkGt(n, cur), n, cur); break;
      case fe::AggKind::Min: next = mkIte(mkLt(n, cur), n, cur); break;
      default: {
        next = mkAdd(cur, n);
        // A keyed source replaces its old row: subtract the stored value.
        const auto& sd = c_.relation(agg->source.relation);
        std::optional<std::size_t> scol;
        for (std::size_t k = 0; k < agg->source.args.size(); ++k)
          if (agg->source.args[k].isVar() && agg->source.args[k].name == *agg->aggVar) scol = k;
        auto svc = sd.valueColumns();
        auto sp = scol ? std::find(svc.begin(), svc.end(), *scol) : svc.end();
        if (sp != svc.end() && gamma_.has(sd.name)) {
          const StateVar& sv = gamma_.of(sd.name)[sp - svc.begin()];
          Expr old = sv.expr();
          if (!sd.singleton) {
            std::vector<Expr> keys;
            for (auto k : sd.keyColumns()) keys.push_back(tau.args.at(k));
            old = mkSelect(old, keys);
          }
          next = mkSub(next, old);
        }
      }
      }
    }
    unify(fe::Arg::var(agg->out), next, varSort(agg->out), i);
  }

  // Conditions.
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    auto* c = std::get_if<fe::ConditionLit>(&r.body[i]);
    if (!c) continue;
    // Constants take the sort of the other operand.
    Sort s = Sort::integer();
    if (c->lhs.isVar()) s = varSort(c->lhs.name);
    else if (c->rhs.isVar()) s = varSort(c->rhs.name);
    Expr a = term(c->lhs, s), b = term(c->rhs, s);
    Expr f;
    switch (c->op) {
    case fe::CmpOp::Gt: f = mkGt(a, b); break;
    case fe::CmpOp::Lt: f = mkLt(a, b); break;
    case fe::CmpOp::Ge: f = mkGe(a, b); break;
    case fe::CmpOp::Le: f = mkLe(a, b); break;
    case fe::CmpOp::Ne: f = mkNe(a, b); break;
    case fe::CmpOp::Eq: f = mkEq(a, b); break;
    }
    add(f, i);
  }
  return out;
}

RuleEncoding Encoder::encodeDeConRule(std::size_t ri, const Trigger& tau) {
  const fe::Rule& r = c_.rules().at(ri);
  BodyEncoding body = encodeRuleBody(ri, tau, BindMode::Eager);
  const auto& hd = c_.relation(r.head.relation);

  std::vector<Expr> head;
  for (std::size_t k = 0; k < r.head.args.size(); ++k) {
    const auto& a = r.head.args[k];
    Sort s = sortOf(hd.columns[k].type);
    if (a.isConst()) {
      head.push_back(constant(a, s));
      continue;
    }
    auto it = body.bindings.find(a.name);
    if (it == body.bindings.end()) {
      error(r.loc, "internal: head variable '" + a.name + "' left unbound");
      return {mkFalse(), mkFalse(), {r.head.relation}};
    }
    head.push_back(it->second);
  }

  RuleEncoding out;
  out.guard = body.formula();
  out.writes.push_back(r.head.relation);
  std::vector<Expr> branch{body.matrix(), update(r.head.relation, head)};
  for (std::size_t dr : c_.dependentRules(ri)) {
    RuleEncoding d = encodeDeConRule(dr, Trigger{r.head.relation, head});
    branch.push_back(d.formula);
    out.writes.insert(out.writes.end(), d.writes.begin(), d.writes.end());
  }
  std::vector<Expr> frames;
  std::set<std::string> seen;
  for (const auto& w : out.writes)
    if (seen.insert(w).second) frames.push_back(frame(w));

  Expr trueBranch = mkExists(body.locals, mkAnd(branch));
  Expr falseBranch = mkAnd(mkNot(out.guard), mkAnd(frames));
  // The branches are disjoint (guard vs. its negation), so ⊕ and ∨ agree.
  out.formula = mkOr(trueBranch, falseBranch);
  return out;
}

Transition Encoder::encodeTransaction(std::size_t ri) {
  resetScope();
  const fe::Rule& r = c_.rules().at(ri);
  const fe::RelationalLit* trig = r.triggerLiteral();
  const auto& td = c_.relation(trig->relation);

  Transition t;
  t.rule = ri;
  t.name = trig->relation.substr(fe::kHandlerPrefix.size());
  Trigger tau{trig->relation, {}};
  for (std::size_t k = 0; k < trig->args.size(); ++k) {
    const auto& a = trig->args[k];
    std::string base = a.isVar() && !a.wildcard ? a.name : td.columns[k].name;
    Var p{names_.fresh(base), sortOf(td.columns[k].type), VarRole::Param, false};
    t.params.push_back(p);
    tau.args.push_back(mkVar(p));
  }
  // Env params are allocated before locals so they keep their plain names.
  for (const auto& lit : r.body)
    if (auto* l = std::get_if<fe::RelationalLit>(&lit); l && fe::findBuiltin(l->relation))
      envParam(l->relation);
  if (env_.sender) t.params.push_back(*env_.sender);
  if (env_.value) t.params.push_back(*env_.value);

  RuleEncoding enc = encodeDeConRule(ri, tau);
  std::map<std::string, int> count;
  for (const auto& w : enc.writes)
    if (++count[w] == 2)
      error(r.loc, "relation '" + w + "' is written more than once by transaction '" + t.name +
                       "'; each transaction may update a relation at most once");

  std::vector<Expr> parts{enc.formula};
  for (const auto& sv : gamma_.vars()) {
    if (count.count(sv.relation)) {
      t.writes.push_back(sv.name);
    } else {
      parts.push_back(mkEq(sv.expr(true), sv.expr()));
    }
  }
  t.formula = mkAnd(parts);
  t.guard = enc.guard;
  return t;
}

Property Encoder::encodeProperty(std::size_t ri, std::string name) {
  resetScope();
  BodyEncoding body = encodeRuleBody(ri, Trigger::check(), BindMode::Eager);
  return Property{std::move(name), mkNot(body.formula()), ri};
}

} // namespace dcv::compiler
