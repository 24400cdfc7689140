#include "dcv/logic/expr.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace dcv::logic {

namespace {

std::size_t combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hashVar(const Var& v) {
  std::size_t h = std::hash<std::string>{}(v.name);
  h = combine(h, v.primed);
  h = combine(h, static_cast<std::size_t>(v.role));
  return combine(h, static_cast<std::size_t>(v.sort.kind()));
}

Expr make(Node n) {
  std::size_t h = static_cast<std::size_t>(n.op) * 7919;
  h = combine(h, static_cast<std::size_t>(n.sort.kind()));
  for (const auto& k : n.kids) h = combine(h, k.hash());
  if (n.op == Op::Var) h = combine(h, hashVar(n.var));
  h = combine(h, std::hash<std::int64_t>{}(n.value));
  for (const auto& b : n.bound) h = combine(h, hashVar(b));
  if (!n.name.empty()) h = combine(h, std::hash<std::string>{}(n.name));
  n.hash = h;
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr makeOp(Op op, Sort sort, std::vector<Expr> kids) {
  Node n;
  n.op = op;
  n.sort = std::move(sort);
  n.kids = std::move(kids);
  return make(std::move(n));
}

void requireBool(const Expr& e, const char* ctx) {
  if (!e.sort().isBool())
    throw SortError(std::string(ctx) + ": expected bool operand, got " + e.sort().toString() +
                    " in " + toString(e));
}

void requireNumeric(const Expr& e, const char* ctx) {
  if (!e.sort().isNumeric())
    throw SortError(std::string(ctx) + ": expected numeric operand, got " + e.sort().toString() +
                    " in " + toString(e));
}

bool isIntConst(const Expr& e) { return e.op() == Op::IntConst; }
bool isBoolConst(const Expr& e) { return e.op() == Op::BoolConst; }

Sort arithSort(const Expr& a, const Expr& b, Op op) {
  if (op == Op::Sub) return Sort::integer();
  if (a.sort().kind() == SortKind::Int || b.sort().kind() == SortKind::Int) return Sort::integer();
  return Sort::uinteger();
}

Expr arith(Op op, const Expr& a, const Expr& b, const char* ctx) {
  requireNumeric(a, ctx);
  requireNumeric(b, ctx);
  Sort s = arithSort(a, b, op);
  if (isIntConst(a) && isIntConst(b)) {
    std::int64_t x = a.value(), y = b.value();
    switch (op) {
    case Op::Add: return mkInt(x + y, x + y < 0 ? Sort::integer() : s);
    case Op::Sub: return mkInt(x - y, Sort::integer());
    case Op::Mul: return mkInt(x * y, s);
    default: break;
    }
  }
  return makeOp(op, std::move(s), {a, b});
}

Expr cmp(Op op, const Expr& a, const Expr& b, const char* ctx) {
  requireNumeric(a, ctx);
  requireNumeric(b, ctx);
  if (isIntConst(a) && isIntConst(b)) {
    std::int64_t x = a.value(), y = b.value();
    switch (op) {
    case Op::Lt: return mkBool(x < y);
    case Op::Le: return mkBool(x <= y);
    case Op::Gt: return mkBool(x > y);
    case Op::Ge: return mkBool(x >= y);
    default: break;
    }
  }
  return makeOp(op, Sort::boolean(), {a, b});
}

void checkKeys(const Expr& map, const std::vector<Expr>& keys, const char* ctx) {
  if (!map.sort().isMap()) throw SortError(std::string(ctx) + ": not a map: " + toString(map));
  auto ks = map.sort().keys();
  if (ks.size() != keys.size())
    throw SortError(std::string(ctx) + ": expected " + std::to_string(ks.size()) + " keys for " +
                    toString(map));
  for (std::size_t i = 0; i < ks.size(); ++i)
    if (!compatible(ks[i], keys[i].sort()))
      throw SortError(std::string(ctx) + ": key " + toString(keys[i]) + " of sort " +
                      keys[i].sort().toString() + " does not match " + ks[i].toString());
}

Expr quantifier(Op op, std::vector<Var> vars, const Expr& body) {
  requireBool(body, "quantifier");
  if (isBoolConst(body)) return body;
  VarSet fv = freeVars(body);
  std::vector<Var> kept;
  for (auto& v : vars)
    if (fv.count(v) && std::find(kept.begin(), kept.end(), v) == kept.end()) kept.push_back(std::move(v));
  if (kept.empty()) return body;
  Node n;
  n.op = op;
  n.sort = Sort::boolean();
  n.kids = {body};
  n.bound = std::move(kept);
  return make(std::move(n));
}

} // namespace

Op Expr::op() const { return node_->op; }
const Sort& Expr::sort() const { return node_->sort; }
const std::vector<Expr>& Expr::kids() const { return node_->kids; }
const Var& Expr::var() const { return node_->var; }
std::int64_t Expr::value() const { return node_->value; }
const std::vector<Var>& Expr::bound() const { return node_->bound; }
const std::string& Expr::name() const { return node_->name; }
bool Expr::isTrue() const { return node_ && node_->op == Op::BoolConst && node_->value; }
bool Expr::isFalse() const { return node_ && node_->op == Op::BoolConst && !node_->value; }
std::size_t Expr::hash() const { return node_ ? node_->hash : 0; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const Node& x = *a.node_;
  const Node& y = *b.node_;
  if (x.hash != y.hash || x.op != y.op || !(x.sort == y.sort) || x.value != y.value ||
      x.name != y.name || !(x.bound == y.bound) || x.kids.size() != y.kids.size())
    return false;
  if (x.op == Op::Var && !(x.var == y.var)) return false;
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (!(x.kids[i] == y.kids[i])) return false;
  return true;
}

Expr mkVar(const Var& v) {
  Node n;
  n.op = Op::Var;
  n.sort = v.sort;
  n.var = v;
  return make(std::move(n));
}

Expr mkBool(bool b) {
  static const Expr t = [] {
    Node n;
    n.op = Op::BoolConst;
    n.sort = Sort::boolean();
    n.value = 1;
    return make(std::move(n));
  }();
  static const Expr f = [] {
    Node n;
    n.op = Op::BoolConst;
    n.sort = Sort::boolean();
    n.value = 0;
    return make(std::move(n));
  }();
  return b ? t : f;
}

Expr mkTrue() { return mkBool(true); }
Expr mkFalse() { return mkBool(false); }

Expr mkInt(std::int64_t v, Sort s) {
  if (!s.isIntegral()) throw SortError("integer constant of sort " + s.toString());
  if (s.kind() == SortKind::UInt && v < 0) s = Sort::integer();
  Node n;
  n.op = Op::IntConst;
  n.sort = std::move(s);
  n.value = v;
  return make(std::move(n));
}

Expr mkAdd(const Expr& a, const Expr& b) { return arith(Op::Add, a, b, "+"); }
Expr mkSub(const Expr& a, const Expr& b) { return arith(Op::Sub, a, b, "-"); }
Expr mkMul(const Expr& a, const Expr& b) { return arith(Op::Mul, a, b, "*"); }
Expr mkDiv(const Expr& a, const Expr& b) { return arith(Op::Div, a, b, "/"); }

Expr mkSelect(const Expr& map, const std::vector<Expr>& keys) {
  checkKeys(map, keys, "select");
  if (map.op() == Op::ConstMap) return map.kid(0);
  std::vector<Expr> kids{map};
  kids.insert(kids.end(), keys.begin(), keys.end());
  return makeOp(Op::Select, map.sort().value(), std::move(kids));
}

Expr mkStore(const Expr& map, const std::vector<Expr>& keys, const Expr& value) {
  checkKeys(map, keys, "store");
  if (!compatible(map.sort().value(), value.sort()))
    throw SortError("store: value " + toString(value) + " does not match " + map.sort().toString());
  std::vector<Expr> kids{map};
  kids.insert(kids.end(), keys.begin(), keys.end());
  kids.push_back(value);
  return makeOp(Op::Store, map.sort(), std::move(kids));
}

Expr mkConstMap(const Sort& mapSort, const Expr& value) {
  if (!mapSort.isMap()) throw SortError("const map of non-map sort " + mapSort.toString());
  if (!compatible(mapSort.value(), value.sort()))
    throw SortError("const map value does not match " + mapSort.toString());
  return makeOp(Op::ConstMap, mapSort, {value});
}

Expr mkIte(const Expr& c, const Expr& t, const Expr& e) {
  requireBool(c, "ite");
  if (!compatible(t.sort(), e.sort())) throw SortError("ite: branch sorts differ");
  if (c.isTrue()) return t;
  if (c.isFalse()) return e;
  if (t == e) return t;
  Sort s = t.sort();
  if (t.sort().isNumeric() && !(t.sort() == e.sort())) s = Sort::integer();
  return makeOp(Op::Ite, std::move(s), {c, t, e});
}

Expr mkEq(const Expr& a, const Expr& b) {
  if (!compatible(a.sort(), b.sort()))
    throw SortError("=: cannot compare " + a.sort().toString() + " with " + b.sort().toString() +
                    " (" + toString(a) + ", " + toString(b) + ")");
  if (a == b) return mkTrue();
  if (a.sort().isBool()) {
    if (isBoolConst(b)) return b.boolValue() ? a : mkNot(a);
    if (isBoolConst(a)) return a.boolValue() ? b : mkNot(b);
  }
  if (isIntConst(a) && isIntConst(b)) return mkBool(a.value() == b.value());
  return makeOp(Op::Eq, Sort::boolean(), {a, b});
}

Expr mkNe(const Expr& a, const Expr& b) {
  if (!compatible(a.sort(), b.sort()))
    throw SortError("≠: cannot compare " + a.sort().toString() + " with " + b.sort().toString());
  if (a == b) return mkFalse();
  if (a.sort().isBool()) return mkNot(mkEq(a, b));
  if (isIntConst(a) && isIntConst(b)) return mkBool(a.value() != b.value());
  return makeOp(Op::Ne, Sort::boolean(), {a, b});
}

Expr mkLt(const Expr& a, const Expr& b) { return cmp(Op::Lt, a, b, "<"); }
Expr mkLe(const Expr& a, const Expr& b) { return cmp(Op::Le, a, b, "≤"); }
Expr mkGt(const Expr& a, const Expr& b) { return cmp(Op::Gt, a, b, ">"); }
Expr mkGe(const Expr& a, const Expr& b) { return cmp(Op::Ge, a, b, "≥"); }

Expr mkNot(const Expr& a) {
  requireBool(a, "¬");
  if (isBoolConst(a)) return mkBool(!a.boolValue());
  if (a.op() == Op::Not) return a.kid(0);
  return makeOp(Op::Not, Sort::boolean(), {a});
}

Expr mkAnd(const std::vector<Expr>& xs) {
  std::vector<Expr> flat;
  std::function<void(const Expr&)> add = [&](const Expr& x) {
    requireBool(x, "∧");
    if (x.op() == Op::And) {
      for (const auto& k : x.kids()) add(k);
    } else if (!x.isTrue() && std::find(flat.begin(), flat.end(), x) == flat.end()) {
      flat.push_back(x);
    }
  };
  for (const auto& x : xs) add(x);
  for (const auto& x : flat)
    if (x.isFalse()) return mkFalse();
  if (flat.empty()) return mkTrue();
  if (flat.size() == 1) return flat.front();
  return makeOp(Op::And, Sort::boolean(), std::move(flat));
}

Expr mkAnd(const Expr& a, const Expr& b) { return mkAnd(std::vector<Expr>{a, b}); }

Expr mkOr(const std::vector<Expr>& xs) {
  std::vector<Expr> flat;
  std::function<void(const Expr&)> add = [&](const Expr& x) {
    requireBool(x, "∨");
    if (x.op() == Op::Or) {
      for (const auto& k : x.kids()) add(k);
    } else if (!x.isFalse() && std::find(flat.begin(), flat.end(), x) == flat.end()) {
      flat.push_back(x);
    }
  };
  for (const auto& x : xs) add(x);
  for (const auto& x : flat)
    if (x.isTrue()) return mkTrue();
  if (flat.empty()) return mkFalse();
  if (flat.size() == 1) return flat.front();
  return makeOp(Op::Or, Sort::boolean(), std::move(flat));
}

Expr mkOr(const Expr& a, const Expr& b) { return mkOr(std::vector<Expr>{a, b}); }

Expr mkImplies(const Expr& a, const Expr& b) {
  requireBool(a, "⟹");
  requireBool(b, "⟹");
  if (a.isTrue()) return b;
  if (a.isFalse() || b.isTrue()) return mkTrue();
  if (b.isFalse()) return mkNot(a);
  return makeOp(Op::Implies, Sort::boolean(), {a, b});
}

Expr mkXor(const Expr& a, const Expr& b) {
  requireBool(a, "⊕");
  requireBool(b, "⊕");
  if (a.isFalse()) return b;
  if (b.isFalse()) return a;
  if (a.isTrue()) return mkNot(b);
  if (b.isTrue()) return mkNot(a);
  return makeOp(Op::Xor, Sort::boolean(), {a, b});
}

Expr mkForall(std::vector<Var> vars, const Expr& body) {
  return quantifier(Op::Forall, std::move(vars), body);
}

Expr mkExists(std::vector<Var> vars, const Expr& body) {
  return quantifier(Op::Exists, std::move(vars), body);
}

Expr mkNamed(std::string name, const Expr& body) {
  Node n;
  n.op = Op::Named;
  n.sort = body.sort();
  n.kids = {body};
  n.name = std::move(name);
  return make(std::move(n));
}

Expr defaultValue(const Sort& s) {
  if (s.isBool()) return mkFalse();
  if (s.isIntegral()) return mkInt(0, s);
  throw SortError("no default value for " + s.toString());
}

// ---------------------------------------------------------------------------

namespace {

void collectFree(const Expr& e, VarSet& bound, VarSet& out) {
  switch (e.op()) {
  case Op::Var:
    if (!bound.count(e.var())) out.insert(e.var());
    return;
  case Op::Forall:
  case Op::Exists: {
    std::vector<Var> added;
    for (const auto& v : e.bound())
      if (bound.insert(v).second) added.push_back(v);
    collectFree(e.kid(0), bound, out);
    for (const auto& v : added) bound.erase(v);
    return;
  }
  default:
    for (const auto& k : e.kids()) collectFree(k, bound, out);
  }
}

Expr rebuild(const Expr& e, std::vector<Expr> kids) {
  switch (e.op()) {
  case Op::Add: return mkAdd(kids[0], kids[1]);
  case Op::Sub: return mkSub(kids[0], kids[1]);
  case Op::Mul: return mkMul(kids[0], kids[1]);
  case Op::Div: return mkDiv(kids[0], kids[1]);
  case Op::Select: return mkSelect(kids[0], {kids.begin() + 1, kids.end()});
  case Op::Store: return mkStore(kids[0], {kids.begin() + 1, kids.end() - 1}, kids.back());
  case Op::ConstMap: return mkConstMap(e.sort(), kids[0]);
  case Op::Ite: return mkIte(kids[0], kids[1], kids[2]);
  case Op::Eq: return mkEq(kids[0], kids[1]);
  case Op::Ne: return mkNe(kids[0], kids[1]);
  case Op::Lt: return mkLt(kids[0], kids[1]);
  case Op::Le: return mkLe(kids[0], kids[1]);
  case Op::Gt: return mkGt(kids[0], kids[1]);
  case Op::Ge: return mkGe(kids[0], kids[1]);
  case Op::Not: return mkNot(kids[0]);
  case Op::And: return mkAnd(kids);
  case Op::Or: return mkOr(kids);
  case Op::Implies: return mkImplies(kids[0], kids[1]);
  case Op::Xor: return mkXor(kids[0], kids[1]);
  case Op::Forall: return mkForall(e.bound(), kids[0]);
  case Op::Exists: return mkExists(e.bound(), kids[0]);
  case Op::Named: return mkNamed(e.name(), kids[0]);
  default: return e;
  }
}

template <typename F>
Expr mapKids(const Expr& e, F&& f) {
  if (e.kids().empty()) return e;
  std::vector<Expr> kids;
  kids.reserve(e.kids().size());
  bool changed = false;
  for (const auto& k : e.kids()) {
    kids.push_back(f(k));
    if (!(kids.back().node() == k.node())) changed = true;
  }
  if (!changed) return e;
  return rebuild(e, std::move(kids));
}

Expr primeImpl(const Expr& e) {
  if (e.op() == Op::Var) {
    const Var& v = e.var();
    if (v.role != VarRole::State) return e;
    if (v.primed) throw std::logic_error("prime: state variable " + v.name + " is already primed");
    Var p = v;
    p.primed = true;
    return mkVar(p);
  }
  if (e.op() == Op::Named) return mkNamed(e.name() + "'", primeImpl(e.kid(0)));
  return mapKids(e, primeImpl);
}

std::string freshName(const std::string& base, const std::set<std::string>& taken) {
  for (int i = 1;; ++i) {
    std::string cand = base + "_" + std::to_string(i);
    if (!taken.count(cand)) return cand;
  }
}

Expr substImpl(const Expr& e, const Substitution& sigma) {
  if (sigma.empty()) return e;
  switch (e.op()) {
  case Op::Var: {
    auto it = sigma.find(e.var());
    return it == sigma.end() ? e : it->second;
  }
  case Op::Forall:
  case Op::Exists: {
    Substitution inner = sigma;
    for (const auto& v : e.bound()) inner.erase(v);
    if (inner.empty()) return e;
    // Names that a bound variable must avoid.
    std::set<std::string> taken;
    VarSet bodyFree = freeVars(e.kid(0));
    for (const auto& v : bodyFree) taken.insert(v.name);
    VarSet replFree;
    for (const auto& [v, r] : inner) {
      if (!bodyFree.count(v)) continue;
      for (const auto& fv : freeVars(r)) replFree.insert(fv);
    }
    for (const auto& v : replFree) taken.insert(v.name);
    std::vector<Var> vars = e.bound();
    Substitution rename;
    for (auto& v : vars) {
      bool clash = std::any_of(replFree.begin(), replFree.end(),
                               [&](const Var& f) { return f.name == v.name; });
      if (!clash) continue;
      Var fresh = v;
      fresh.name = freshName(v.name, taken);
      taken.insert(fresh.name);
      rename.emplace(v, mkVar(fresh));
      v = fresh;
    }
    Expr body = rename.empty() ? e.kid(0) : substImpl(e.kid(0), rename);
    body = substImpl(body, inner);
    return e.op() == Op::Forall ? mkForall(vars, body) : mkExists(vars, body);
  }
  default:
    return mapKids(e, [&](const Expr& k) { return substImpl(k, sigma); });
  }
}

Expr expandImpl(const Expr& e) {
  if (e.op() == Op::Named) return expandImpl(e.kid(0));
  return mapKids(e, expandImpl);
}

// Precedence: higher binds tighter.
int precedence(const Expr& e) {
  switch (e.op()) {
  case Op::Forall:
  case Op::Exists: return 0;
  case Op::Implies: return 1;
  case Op::Or: return 2;
  case Op::Xor: return 3;
  case Op::And: return 4;
  case Op::Not: return 5;
  case Op::Eq:
  case Op::Ne:
  case Op::Lt:
  case Op::Le:
  case Op::Gt:
  case Op::Ge: return 6;
  case Op::Add:
  case Op::Sub: return 7;
  case Op::Mul:
  case Op::Div: return 8;
  default: return 9;
  }
}

void print(std::ostream& os, const Expr& e);

void printChild(std::ostream& os, const Expr& child, int minPrec) {
  if (precedence(child) < minPrec) {
    os << '(';
    print(os, child);
    os << ')';
  } else {
    print(os, child);
  }
}

void printBinary(std::ostream& os, const Expr& e, const char* sym, bool rightAssoc = false) {
  int p = precedence(e);
  printChild(os, e.kid(0), rightAssoc ? p + 1 : p);
  os << ' ' << sym << ' ';
  printChild(os, e.kid(1), rightAssoc ? p : p + 1);
}

void printNary(std::ostream& os, const Expr& e, const char* sym) {
  int p = precedence(e);
  for (std::size_t i = 0; i < e.kids().size(); ++i) {
    if (i) os << ' ' << sym << ' ';
    printChild(os, e.kid(i), p + 1);
  }
}

void printKeys(std::ostream& os, const std::vector<Expr>& kids, std::size_t from, std::size_t to) {
  for (std::size_t i = from; i < to; ++i) {
    if (i > from) os << ',';
    print(os, kids[i]);
  }
}

void print(std::ostream& os, const Expr& e) {
  switch (e.op()) {
  case Op::Var: os << e.var().key(); return;
  case Op::BoolConst: os << (e.boolValue() ? "true" : "false"); return;
  case Op::IntConst: os << e.value(); return;
  case Op::Add: printBinary(os, e, "+"); return;
  case Op::Sub: printBinary(os, e, "-"); return;
  case Op::Mul: printBinary(os, e, "*"); return;
  case Op::Div: printBinary(os, e, "/"); return;
  case Op::Select:
    printChild(os, e.kid(0), 9);
    os << '[';
    printKeys(os, e.kids(), 1, e.kids().size());
    os << ']';
    return;
  case Op::Store:
    os << "Store(";
    print(os, e.kid(0));
    os << ", ";
    printKeys(os, e.kids(), 1, e.kids().size() - 1);
    os << ", ";
    print(os, e.kids().back());
    os << ')';
    return;
  case Op::ConstMap:
    os << "K(";
    print(os, e.kid(0));
    os << ')';
    return;
  case Op::Ite:
    os << "ite(";
    print(os, e.kid(0));
    os << ", ";
    print(os, e.kid(1));
    os << ", ";
    print(os, e.kid(2));
    os << ')';
    return;
  case Op::Eq: printBinary(os, e, "="); return;
  case Op::Ne: printBinary(os, e, "≠"); return;
  case Op::Lt: printBinary(os, e, "<"); return;
  case Op::Le: printBinary(os, e, "≤"); return;
  case Op::Gt: printBinary(os, e, ">"); return;
  case Op::Ge: printBinary(os, e, "≥"); return;
  case Op::Not:
    os << "¬";
    printChild(os, e.kid(0), 9);
    return;
  case Op::And: printNary(os, e, "∧"); return;
  case Op::Or: printNary(os, e, "∨"); return;
  case Op::Implies: printBinary(os, e, "⟹", true); return;
  case Op::Xor: printNary(os, e, "⊕"); return;
  case Op::Forall:
  case Op::Exists: {
    os << (e.op() == Op::Forall ? "∀" : "∃");
    for (std::size_t i = 0; i < e.bound().size(); ++i) {
      if (i) os << ',';
      os << e.bound()[i].name << ':' << e.bound()[i].sort.toString();
    }
    os << ". ";
    print(os, e.kid(0));
    return;
  }
  case Op::Named: os << e.name(); return;
  }
}

} // namespace

VarSet freeVars(const Expr& e) {
  VarSet bound, out;
  collectFree(e, bound, out);
  return out;
}

Expr prime(const Expr& e) { return primeImpl(e); }

Expr substitute(const Expr& e, const Substitution& sigma) {
  for (const auto& [v, r] : sigma)
    if (!compatible(v.sort, r.sort()))
      throw SortError("substitute: cannot replace " + v.key() + ":" + v.sort.toString() + " with " +
                      toString(r) + ":" + r.sort().toString());
  return substImpl(e, sigma);
}

Expr expandNamed(const Expr& e) { return expandImpl(e); }

std::vector<Expr> conjuncts(const Expr& e) {
  if (e.op() == Op::And) return e.kids();
  if (e.isTrue()) return {};
  return {e};
}

std::string toString(const Expr& e) {
  if (e.isNull()) return "<null>";
  std::ostringstream os;
  print(os, e);
  return os.str();
}

} // namespace dcv::logic
