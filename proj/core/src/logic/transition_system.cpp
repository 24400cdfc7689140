#include "dcv/logic/transition_system.hpp"

#include <algorithm>
#include <sstream>

namespace dcv::logic {

Expr TransitionSystem::tr() const {
  std::vector<Expr> disjuncts;
  disjuncts.reserve(transitions.size());
  Var event{"event", Sort::uinteger(), VarRole::Param};
  for (std::size_t i = 0; i < transitions.size(); ++i)
    disjuncts.push_back(mkAnd(transitions[i].formula,
                              mkEq(mkVar(event), mkInt(static_cast<std::int64_t>(i)))));
  return mkOr(disjuncts);
}

std::vector<Var> TransitionSystem::allParams() const {
  std::vector<Var> out;
  for (const auto& t : transitions)
    for (const auto& p : t.params)
      if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  return out;
}

namespace {

bool isStateVar(const std::vector<StateVar>& vars, const Var& v) {
  return v.role == VarRole::State &&
         std::any_of(vars.begin(), vars.end(), [&](const StateVar& s) {
           return s.name == v.name && s.sort == v.sort;
         });
}

} // namespace

std::optional<std::string> TransitionSystem::checkWellFormed() const {
  for (const auto& v : freeVars(init))
    if (!isStateVar(stateVars, v) || v.primed) return "init mentions non-state variable " + v.key();
  for (const auto& t : transitions) {
    for (const auto& v : freeVars(t.formula)) {
      bool param = std::find(t.params.begin(), t.params.end(), v) != t.params.end();
      if (!param && !isStateVar(stateVars, v))
        return "transition " + t.name + " mentions undeclared variable " + v.key();
    }
  }
  for (const auto& p : properties)
    for (const auto& v : freeVars(p.formula))
      if (!isStateVar(stateVars, v) || v.primed)
        return "property " + p.name + " mentions non-state variable " + v.key();
  return std::nullopt;
}

Expr uintConstraints(const std::vector<StateVar>& vars, bool primed) {
  std::vector<Expr> out;
  for (const auto& sv : vars) {
    if (sv.sort.kind() == SortKind::UInt) {
      out.push_back(mkGe(sv.expr(primed), mkInt(0)));
    } else if (sv.sort.isMap() && sv.sort.value().kind() == SortKind::UInt) {
      std::vector<Var> keys;
      std::vector<Expr> keyExprs;
      auto ks = sv.sort.keys();
      for (std::size_t i = 0; i < ks.size(); ++i) {
        keys.push_back(Var{"k" + std::to_string(i), ks[i], VarRole::Local});
        keyExprs.push_back(mkVar(keys.back()));
      }
      out.push_back(mkForall(keys, mkGe(mkSelect(sv.expr(primed), keyExprs), mkInt(0))));
    }
  }
  return mkAnd(out);
}

std::string dump(const TransitionSystem& ts) {
  std::ostringstream os;
  os << "state:\n";
  for (const auto& v : ts.stateVars)
    os << "  " << v.name << " : " << v.sort.toString() << "    -- " << v.relation << '.' << v.column
       << '\n';
  os << "init:\n";
  for (const auto& c : conjuncts(ts.init)) os << "  " << toString(c) << '\n';
  for (const auto& t : ts.transitions) {
    os << "transition " << t.name << '(';
    for (std::size_t i = 0; i < t.params.size(); ++i) {
      if (i) os << ", ";
      os << t.params[i].name << ": " << t.params[i].sort.toString();
    }
    os << "):\n";
    for (const auto& c : conjuncts(t.formula)) os << "  " << toString(c) << '\n';
  }
  for (const auto& p : ts.properties) os << "property " << p.name << ":\n  " << toString(p.formula) << '\n';
  return os.str();
}

} // namespace dcv::logic
