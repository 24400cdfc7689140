#include "dcv/logic/eval.hpp"

#include <functional>
#include <sstream>

namespace dcv::logic {

Value Value::map(std::map<std::vector<std::int64_t>, Value> entries, Value dflt) {
  auto d = std::make_shared<MapData>();
  d->entries = std::move(entries);
  d->dflt = std::move(dflt);
  return Value(Payload(std::shared_ptr<const MapData>(std::move(d))));
}

Value Value::read(const std::vector<std::int64_t>& key) const {
  const MapData& m = asMap();
  auto it = m.entries.find(key);
  return it == m.entries.end() ? m.dflt : it->second;
}

Value Value::write(const std::vector<std::int64_t>& key, Value v) const {
  auto entries = asMap().entries;
  entries[key] = std::move(v);
  return map(std::move(entries), asMap().dflt);
}

std::string Value::toString() const {
  if (isBool()) return asBool() ? "true" : "false";
  if (isInt()) return std::to_string(asInt());
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [k, v] : asMap().entries) {
    if (!first) os << ", ";
    first = false;
    for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
    os << "↦" << v.toString();
  }
  os << (first ? "" : ", ") << "_↦" << asMap().dflt.toString() << '}';
  return os.str();
}

const std::vector<std::int64_t>* FiniteDomain::of(const Sort& s) const {
  static const std::vector<std::int64_t> bools{0, 1};
  if (s.isBool()) return &bools;
  auto it = values.find(s.kind());
  return it == values.end() ? nullptr : &it->second;
}

namespace {

void forEachKey(const std::vector<Sort>& sorts, const FiniteDomain& dom,
                const std::function<bool(const std::vector<std::int64_t>&)>& f) {
  std::vector<const std::vector<std::int64_t>*> doms;
  for (const auto& s : sorts) {
    auto* d = dom.of(s);
    if (!d) throw EvalError("no finite domain for sort " + s.toString());
    if (d->empty()) return;
    doms.push_back(d);
  }
  std::vector<std::size_t> idx(sorts.size(), 0);
  std::vector<std::int64_t> key(sorts.size());
  while (true) {
    for (std::size_t i = 0; i < sorts.size(); ++i) key[i] = (*doms[i])[idx[i]];
    if (!f(key)) return;
    std::size_t i = 0;
    while (i < sorts.size() && ++idx[i] == doms[i]->size()) idx[i++] = 0;
    if (i == sorts.size()) return;
  }
}

bool scalarEq(const Value& a, const Value& b) { return a.scalar() == b.scalar(); }

class Evaluator {
public:
  Evaluator(const Env& env, const FiniteDomain& dom) : env_(env), dom_(dom) {}

  std::optional<Value> eval(const Expr& e) {
    switch (e.op()) {
    case Op::Var: {
      const std::string k = e.var().key();
      for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
        if (it->first == k) return it->second;
      auto f = env_.find(k);
      if (f == env_.end()) return std::nullopt;
      return f->second;
    }
    case Op::BoolConst: return Value::boolean(e.boolValue());
    case Op::IntConst: return Value::integer(e.value());
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      auto a = eval(e.kid(0)), b = eval(e.kid(1));
      if (!a || !b) return std::nullopt;
      std::int64_t x = a->asInt(), y = b->asInt();
      switch (e.op()) {
      case Op::Add: return Value::integer(x + y);
      case Op::Sub: return Value::integer(x - y);
      case Op::Mul: return Value::integer(x * y);
      default: {
        if (y == 0) throw EvalError("division by zero in " + toString(e));
        // SMT-LIB div: remainder is non-negative.
        std::int64_t q = x / y, r = x % y;
        if (r < 0) q += (y > 0 ? -1 : 1);
        return Value::integer(q);
      }
      }
    }
    case Op::Select: {
      auto m = eval(e.kid(0));
      if (!m) return std::nullopt;
      std::vector<std::int64_t> key;
      for (std::size_t i = 1; i < e.kids().size(); ++i) {
        auto k = eval(e.kid(i));
        if (!k) return std::nullopt;
        key.push_back(k->scalar());
      }
      return m->read(key);
    }
    case Op::Store: {
      auto m = eval(e.kid(0));
      if (!m) return std::nullopt;
      std::vector<std::int64_t> key;
      for (std::size_t i = 1; i + 1 < e.kids().size(); ++i) {
        auto k = eval(e.kid(i));
        if (!k) return std::nullopt;
        key.push_back(k->scalar());
      }
      auto v = eval(e.kids().back());
      if (!v) return std::nullopt;
      return m->write(key, *v);
    }
    case Op::ConstMap: {
      auto v = eval(e.kid(0));
      if (!v) return std::nullopt;
      return Value::map({}, *v);
    }
    case Op::Ite: {
      auto c = eval(e.kid(0));
      if (!c) {
        auto t = eval(e.kid(1)), f = eval(e.kid(2));
        if (t && f && equalValues(*t, *f, e.kid(1).sort(), dom_)) return t;
        return std::nullopt;
      }
      return eval(c->asBool() ? e.kid(1) : e.kid(2));
    }
    case Op::Eq:
    case Op::Ne: {
      auto a = eval(e.kid(0)), b = eval(e.kid(1));
      if (!a || !b) return std::nullopt;
      bool eq = equalValues(*a, *b, e.kid(0).sort(), dom_);
      return Value::boolean(e.op() == Op::Eq ? eq : !eq);
    }
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge: {
      auto a = eval(e.kid(0)), b = eval(e.kid(1));
      if (!a || !b) return std::nullopt;
      std::int64_t x = a->asInt(), y = b->asInt();
      bool r = e.op() == Op::Lt ? x < y : e.op() == Op::Le ? x <= y : e.op() == Op::Gt ? x > y : x >= y;
      return Value::boolean(r);
    }
    case Op::Not: {
      auto a = eval(e.kid(0));
      if (!a) return std::nullopt;
      return Value::boolean(!a->asBool());
    }
    case Op::And: {
      bool unknown = false;
      for (const auto& k : e.kids()) {
        auto v = eval(k);
        if (!v) unknown = true;
        else if (!v->asBool()) return Value::boolean(false);
      }
      if (unknown) return std::nullopt;
      return Value::boolean(true);
    }
    case Op::Or: {
      bool unknown = false;
      for (const auto& k : e.kids()) {
        auto v = eval(k);
        if (!v) unknown = true;
        else if (v->asBool()) return Value::boolean(true);
      }
      if (unknown) return std::nullopt;
      return Value::boolean(false);
    }
    case Op::Implies: {
      auto a = eval(e.kid(0));
      if (a && !a->asBool()) return Value::boolean(true);
      auto b = eval(e.kid(1));
      if (b && b->asBool()) return Value::boolean(true);
      if (!a || !b) return std::nullopt;
      return Value::boolean(false);
    }
    case Op::Xor: {
      auto a = eval(e.kid(0)), b = eval(e.kid(1));
      if (!a || !b) return std::nullopt;
      return Value::boolean(a->asBool() != b->asBool());
    }
    case Op::Forall:
    case Op::Exists: {
      bool isAll = e.op() == Op::Forall;
      std::vector<Sort> sorts;
      for (const auto& v : e.bound()) sorts.push_back(v.sort);
      bool unknown = false;
      std::optional<bool> decided;
      std::size_t base = scopes_.size();
      for (const auto& v : e.bound()) scopes_.emplace_back(v.key(), Value());
      forEachKey(sorts, dom_, [&](const std::vector<std::int64_t>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i)
          scopes_[base + i].second =
              sorts[i].isBool() ? Value::boolean(vals[i] != 0) : Value::integer(vals[i]);
        auto r = eval(e.kid(0));
        if (!r) {
          unknown = true;
        } else if (r->asBool() != isAll) {
          decided = !isAll;
          return false;
        }
        return true;
      });
      scopes_.resize(base);
      if (decided) return Value::boolean(*decided);
      if (unknown) return std::nullopt;
      return Value::boolean(isAll);
    }
    case Op::Named: return eval(e.kid(0));
    }
    return std::nullopt;
  }

private:
  const Env& env_;
  const FiniteDomain& dom_;
  std::vector<std::pair<std::string, Value>> scopes_;
};

} // namespace

bool equalValues(const Value& a, const Value& b, const Sort& s, const FiniteDomain& dom) {
  if (!s.isMap()) return scalarEq(a, b);
  bool haveDomain = true;
  for (const auto& k : s.keys())
    if (!dom.of(k)) haveDomain = false;
  if (haveDomain) {
    bool eq = true;
    forEachKey(s.keys(), dom, [&](const std::vector<std::int64_t>& key) {
      if (!scalarEq(a.read(key), b.read(key))) eq = false;
      return eq;
    });
    return eq;
  }
  // Extensional comparison over an infinite key space.
  if (!scalarEq(a.asMap().dflt, b.asMap().dflt)) return false;
  for (const auto& [k, v] : a.asMap().entries)
    if (!scalarEq(v, b.read(k))) return false;
  for (const auto& [k, v] : b.asMap().entries)
    if (!scalarEq(v, a.read(k))) return false;
  return true;
}

std::optional<Value> evaluatePartial(const Expr& e, const Env& env, const FiniteDomain& dom) {
  return Evaluator(env, dom).eval(e);
}

Value evaluate(const Expr& e, const Env& env, const FiniteDomain& dom) {
  auto v = evaluatePartial(e, env, dom);
  if (!v) throw EvalError("expression depends on unassigned variables: " + toString(e));
  return *v;
}

} // namespace dcv::logic
