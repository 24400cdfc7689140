#pragma once

#include <map>
#include <string>
#include <vector>

#include "dcv/frontend/validate.hpp"
#include "dcv/logic/expr.hpp"

namespace dcv::logic {

/// Column name recorded for membership state variables.
inline constexpr const char* kMemberColumn = "member";

struct StateVar {
  std::string name;
  Sort sort;
  std::string relation;
  /// Origin value column, or kMemberColumn.
  std::string column;

  Var var(bool primed = false) const { return Var{name, sort, VarRole::State, primed}; }
  Expr expr(bool primed = false) const { return mkVar(var(primed)); }

  friend bool operator==(const StateVar&, const StateVar&) = default;
};

Sort sortOf(frontend::ColumnType t);

/// Maps every state relation to the variables that model it:
///  - singleton: one scalar per column;
///  - keyed with value columns: one map (key sorts ↦ column sort) per value column;
///  - all-key relation: one membership map (column sorts ↦ bool).
/// Transaction handlers have no state.
class StateSpace {
public:
  const std::vector<StateVar>& vars() const { return vars_; }
  /// Variables of `relation` in column order; empty for handlers/builtins.
  const std::vector<StateVar>& of(const std::string& relation) const;
  bool has(const std::string& relation) const { return byRelation_.count(relation) != 0; }
  const StateVar* find(const std::string& name) const;

  friend StateSpace mkStateVars(const frontend::ValidatedContract& c);

private:
  std::vector<StateVar> vars_;
  std::map<std::string, std::vector<StateVar>> byRelation_;
};

StateSpace mkStateVars(const frontend::ValidatedContract& c);

} // namespace dcv::logic
