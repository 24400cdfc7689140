#include "interpreter.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace dcv::testing {

namespace fe = dcv::frontend;

const std::vector<std::int64_t>& Domain::of(fe::ColumnType t) const {
  static const std::vector<std::int64_t> bools{0, 1};
  static const std::vector<std::int64_t> none;
  auto it = values.find(t);
  if (it != values.end()) return it->second;
  return t == fe::ColumnType::Bool ? bools : none;
}

std::string Transaction::text(const fe::ValidatedContract& c) const {
  const fe::Rule& r = c.rules().at(rule);
  std::string out = r.triggerLiteral()->relation.substr(fe::kHandlerPrefix.size()) + "(";
  for (std::size_t i = 0; i < args.size(); ++i) out += (i ? "," : "") + std::to_string(args[i]);
  return out + ") from " + std::to_string(sender) + " value " + std::to_string(value);
}

Interpreter::Interpreter(const fe::ValidatedContract& c, Domain dom) : c_(c), dom_(std::move(dom)) {}

namespace {

bool isState(const fe::ValidatedContract& c, const std::string& relation) {
  if (fe::findBuiltin(relation) || fe::isHandlerName(relation)) return false;
  return c.isDeclared(relation);
}

bool usesBuiltin(const fe::Rule& r, std::string_view name) {
  for (const auto& lit : r.body)
    if (auto* l = std::get_if<fe::RelationalLit>(&lit); l && l->relation == name) return true;
  return false;
}

bool allZero(const Tuple& t) {
  return std::all_of(t.begin(), t.end(), [](std::int64_t v) { return v == 0; });
}

} // namespace

Tuple Interpreter::read(const State& s, const std::string& relation, const Tuple& key) const {
  const auto& d = c_.relation(relation);
  std::size_t width = d.singleton ? d.arity() : d.valueColumns().size();
  auto t = s.find(relation);
  if (t != s.end())
    if (auto row = t->second.find(d.singleton ? Tuple{} : key); row != t->second.end()) return row->second;
  return Tuple(width, 0);
}

bool Interpreter::member(const State& s, const std::string& relation, const Tuple& row) const {
  auto t = s.find(relation);
  return t != s.end() && t->second.count(row) != 0;
}

void Interpreter::write(State& s, const std::string& relation, const Tuple& row) const {
  const auto& d = c_.relation(relation);
  Table& t = s[relation];
  if (d.isMembership()) {
    t[row] = {};
    return;
  }
  Tuple key, vals;
  if (d.singleton) {
    vals = row;
  } else {
    for (auto k : d.keyColumns()) key.push_back(row[k]);
    for (auto v : d.valueColumns()) vals.push_back(row[v]);
  }
  if (allZero(vals)) t.erase(key);
  else t[key] = vals;
  if (t.empty()) s.erase(relation);
}

std::vector<std::size_t> Interpreter::dependents(const std::string& relation) const {
  std::vector<std::size_t> out;
  const auto& rules = c_.rules();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const fe::Rule& r = rules[i];
    if (r.kind == fe::RuleKind::ViolationQuery || r.triggerLiteral()) continue;
    bool reads = false;
    for (const auto& lit : r.body) {
      if (auto* l = std::get_if<fe::RelationalLit>(&lit)) reads |= l->relation == relation;
      if (auto* a = std::get_if<fe::AggregatorLit>(&lit)) reads |= a->source.relation == relation;
    }
    if (reads) out.push_back(i);
  }
  return out;
}

std::vector<Interpreter::Binding> Interpreter::match(std::size_t rule, const Trigger* trig, const Transaction* tx,
                                                     const State& pre) const {
  const fe::Rule& r = c_.rules().at(rule);
  auto type = [&](const std::string& v) { return c_.varType(rule, v); };
  auto unify = [&](Binding& b, const fe::Arg& a, std::int64_t v, fe::ColumnType t) {
    if (a.isConst()) return a.value == v;
    if (auto it = b.find(a.name); it != b.end()) return it->second == v;
    if ((t == fe::ColumnType::UInt || type(a.name) == fe::ColumnType::UInt) && v < 0) return false;
    b.emplace(a.name, v);
    return true;
  };
  auto value = [&](const Binding& b, const fe::Arg& a) -> std::int64_t {
    if (a.isConst()) return a.value;
    auto it = b.find(a.name);
    if (it == b.end()) throw std::logic_error("interpreter: unbound variable " + a.name);
    return it->second;
  };
  auto boundArg = [](const Binding& b, const fe::Arg& a) { return a.isConst() || b.count(a.name) != 0; };

  Binding start;
  // The trigger row, also for aggregator sources over the trigger relation.
  if (trig) {
    const auto& d = c_.relation(trig->relation);
    for (const auto& lit : r.body) {
      const fe::RelationalLit* l = nullptr;
      if (auto* x = std::get_if<fe::RelationalLit>(&lit); x && x->relation == trig->relation) l = x;
      if (auto* a = std::get_if<fe::AggregatorLit>(&lit); a && a->source.relation == trig->relation) l = &a->source;
      if (!l) continue;
      for (std::size_t k = 0; k < l->args.size(); ++k)
        if (!unify(start, l->args[k], trig->row.at(k), d.columns[k].type)) return {};
    }
  }
  for (const auto& lit : r.body) {
    auto* l = std::get_if<fe::RelationalLit>(&lit);
    if (!l || !fe::findBuiltin(l->relation)) continue;
    if (!tx) throw std::logic_error("interpreter: environment literal outside a transaction");
    std::int64_t v = l->relation == fe::kMsgSender ? tx->sender : tx->value;
    if (!unify(start, l->args.at(0), v, fe::findBuiltin(l->relation)->columns[0].type)) return {};
  }

  std::vector<std::size_t> reads;
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    auto* l = std::get_if<fe::RelationalLit>(&r.body[i]);
    if (l && (!trig || l->relation != trig->relation) && !fe::findBuiltin(l->relation)) reads.push_back(i);
  }

  // Everything after the state reads is deterministic.
  auto finish = [&](Binding b, std::vector<Binding>& out) {
    std::vector<const fe::FunctionLit*> fns;
    for (const auto& lit : r.body)
      if (auto* f = std::get_if<fe::FunctionLit>(&lit)) fns.push_back(f);
    while (!fns.empty()) {
      auto it = std::find_if(fns.begin(), fns.end(),
                             [&](const fe::FunctionLit* f) { return boundArg(b, f->lhs) && boundArg(b, f->rhs); });
      if (it == fns.end()) throw std::logic_error("interpreter: function with unbound operands");
      const fe::FunctionLit& f = **it;
      fns.erase(it);
      std::int64_t x = value(b, f.lhs), y = value(b, f.rhs), res = 0;
      switch (f.op) {
      case fe::ArithOp::Add: res = x + y; break;
      case fe::ArithOp::Sub: res = x - y; break;
      case fe::ArithOp::Mul: res = x * y; break;
      case fe::ArithOp::Div:
        if (y == 0) return;
        res = x / y;
        break;
      }
      if (!unify(b, fe::Arg::var(f.out), res, type(f.out))) return;
    }
    for (const auto& lit : r.body) {
      auto* a = std::get_if<fe::AggregatorLit>(&lit);
      if (!a || !trig || a->source.relation != trig->relation) continue;
      const auto& hd = c_.relation(r.head.relation);
      std::size_t col = 0;
      while (!(r.head.args[col].isVar() && r.head.args[col].name == a->out)) ++col;
      Tuple key;
      for (auto k : hd.keyColumns()) key.push_back(value(b, r.head.args[k]));
      Tuple row = read(pre, r.head.relation, key);
      std::size_t idx = col;
      if (!hd.singleton) {
        auto vc = hd.valueColumns();
        idx = std::find(vc.begin(), vc.end(), col) - vc.begin();
      }
      std::int64_t cur = row.at(idx), next = 0;
      if (a->agg == fe::AggKind::Count) {
        next = cur + 1;
      } else {
        std::int64_t n = b.at(*a->aggVar);
        if (a->agg == fe::AggKind::Max) next = std::max(n, cur);
        else if (a->agg == fe::AggKind::Min) next = std::min(n, cur);
        else {
          next = cur + n;
          // A keyed source row is replaced, so its old amount leaves the sum.
          const auto& sd = c_.relation(a->source.relation);
          auto svc = sd.valueColumns();
          for (std::size_t v = 0; v < svc.size() && isState(c_, sd.name); ++v) {
            const auto& sa = a->source.args[svc[v]];
            if (!sa.isVar() || sa.name != *a->aggVar) continue;
            Tuple skey;
            if (!sd.singleton)
              for (auto k : sd.keyColumns()) skey.push_back(trig->row.at(k));
            Tuple old = read(pre, sd.name, skey);
            next -= old.at(sd.singleton ? svc[v] : v);
          }
        }
      }
      if (!unify(b, fe::Arg::var(a->out), next, type(a->out))) return;
    }
    for (const auto& lit : r.body) {
      auto* c = std::get_if<fe::ConditionLit>(&lit);
      if (!c) continue;
      std::int64_t x = value(b, c->lhs), y = value(b, c->rhs);
      bool ok = false;
      switch (c->op) {
      case fe::CmpOp::Gt: ok = x > y; break;
      case fe::CmpOp::Lt: ok = x < y; break;
      case fe::CmpOp::Ge: ok = x >= y; break;
      case fe::CmpOp::Le: ok = x <= y; break;
      case fe::CmpOp::Ne: ok = x != y; break;
      case fe::CmpOp::Eq: ok = x == y; break;
      }
      if (!ok) return;
    }
    out.push_back(std::move(b));
  };

  std::vector<Binding> out;
  std::function<void(std::vector<std::size_t>, Binding)> readState = [&](std::vector<std::size_t> pending, Binding b) {
    if (pending.empty()) {
      finish(std::move(b), out);
      return;
    }
    auto keysBound = [&](std::size_t i) {
      const auto& l = std::get<fe::RelationalLit>(r.body[i]);
      const auto& d = c_.relation(l.relation);
      auto keys = isState(c_, l.relation) ? d.keyColumns() : std::vector<std::size_t>{};
      if (!isState(c_, l.relation))
        for (std::size_t k = 0; k < l.args.size(); ++k) keys.push_back(k);
      return std::all_of(keys.begin(), keys.end(), [&](std::size_t k) { return boundArg(b, l.args[k]); });
    };
    auto it = std::find_if(pending.begin(), pending.end(), keysBound);
    if (it == pending.end()) {
      // Enumerate the first open key over the domain and the stored keys.
      const auto& l = std::get<fe::RelationalLit>(r.body[pending.front()]);
      const auto& d = c_.relation(l.relation);
      auto keys = isState(c_, l.relation) ? d.keyColumns() : std::vector<std::size_t>{};
      if (!isState(c_, l.relation))
        for (std::size_t k = 0; k < l.args.size(); ++k) keys.push_back(k);
      for (std::size_t pos = 0; pos < keys.size(); ++pos) {
        const fe::Arg& a = l.args[keys[pos]];
        if (boundArg(b, a)) continue;
        std::set<std::int64_t> vals(dom_.of(d.columns[keys[pos]].type).begin(),
                                    dom_.of(d.columns[keys[pos]].type).end());
        if (auto t = pre.find(l.relation); t != pre.end() && isState(c_, l.relation))
          for (const auto& [k, v] : t->second) vals.insert(d.isMembership() ? k[keys[pos]] : k[pos]);
        for (std::int64_t v : vals) {
          Binding nb = b;
          if (unify(nb, a, v, d.columns[keys[pos]].type)) readState(pending, std::move(nb));
        }
        return;
      }
    }
    std::size_t i = *it;
    pending.erase(it);
    const auto& l = std::get<fe::RelationalLit>(r.body[i]);
    const auto& d = c_.relation(l.relation);
    if (!isState(c_, l.relation)) {
      // A handler outside its own transaction holds no rows.
      return;
    }
    if (d.isMembership()) {
      Tuple row;
      for (const auto& a : l.args) row.push_back(value(b, a));
      if (member(pre, l.relation, row)) readState(std::move(pending), std::move(b));
      return;
    }
    Tuple key;
    if (!d.singleton)
      for (auto k : d.keyColumns()) key.push_back(value(b, l.args[k]));
    Tuple vals = read(pre, l.relation, key);
    auto cols = d.singleton ? std::vector<std::size_t>{} : d.valueColumns();
    if (d.singleton)
      for (std::size_t k = 0; k < d.arity(); ++k) cols.push_back(k);
    for (std::size_t v = 0; v < cols.size(); ++v)
      if (!unify(b, l.args[cols[v]], vals[v], d.columns[cols[v]].type)) return;
    readState(std::move(pending), std::move(b));
  };
  readState(reads, start);
  return out;
}

std::vector<State> Interpreter::fire(std::size_t rule, const Trigger& trig, const Transaction* tx, const State& pre,
                                     const State& post) const {
  const fe::Rule& r = c_.rules().at(rule);
  auto bindings = match(rule, &trig, tx, pre);
  if (bindings.empty()) return {post};
  std::vector<State> out;
  for (const auto& b : bindings) {
    Tuple row;
    for (const auto& a : r.head.args) {
      if (a.isConst()) row.push_back(a.value);
      else row.push_back(b.at(a.name));
    }
    State next = post;
    write(next, r.head.relation, row);
    std::vector<State> cur{next};
    for (std::size_t dr : dependents(r.head.relation)) {
      std::vector<State> grown;
      for (const auto& s : cur) {
        auto more = fire(dr, Trigger{r.head.relation, row}, nullptr, pre, s);
        grown.insert(grown.end(), more.begin(), more.end());
      }
      cur = std::move(grown);
    }
    out.insert(out.end(), cur.begin(), cur.end());
  }
  return out;
}

std::vector<Transaction> Interpreter::transactions() const {
  std::vector<Transaction> out;
  for (std::size_t ri : c_.transactionRules()) {
    const fe::Rule& r = c_.rules()[ri];
    const auto& td = c_.relation(r.triggerLiteral()->relation);
    std::vector<std::int64_t> senders{0}, values{0};
    if (usesBuiltin(r, fe::kMsgSender)) senders = dom_.of(fe::ColumnType::Address);
    if (usesBuiltin(r, fe::kMsgValue)) values = dom_.of(fe::ColumnType::UInt);
    std::vector<Tuple> argsList{{}};
    for (const auto& col : td.columns) {
      std::vector<Tuple> grown;
      for (const auto& prefix : argsList)
        for (std::int64_t v : dom_.of(col.type)) {
          Tuple t = prefix;
          t.push_back(v);
          grown.push_back(std::move(t));
        }
      argsList = std::move(grown);
    }
    for (const auto& args : argsList)
      for (auto s : senders)
        for (auto v : values) out.push_back({ri, args, s, v});
  }
  return out;
}

std::vector<State> Interpreter::step(const State& s, const Transaction& tx) const {
  const fe::Rule& r = c_.rules().at(tx.rule);
  auto out = fire(tx.rule, Trigger{r.triggerLiteral()->relation, tx.args}, &tx, s, s);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Interpreter::violates(const State& s, const std::string& relation) const {
  for (std::size_t ri : c_.violationRules())
    if (c_.rules()[ri].head.relation == relation && !match(ri, nullptr, nullptr, s).empty()) return true;
  return false;
}

} // namespace dcv::testing
