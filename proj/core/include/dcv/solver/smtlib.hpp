#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dcv/logic/expr.hpp"

namespace dcv::solver {

/// A validity question: do the assumptions entail the goal?
struct Obligation {
  std::string name;
  std::vector<logic::Expr> assumptions;
  logic::Expr goal;
  /// Boolean terms whose values are requested when the answer is sat.
  std::vector<logic::Expr> probes;
  /// Emit quantified non-negativity axioms for uint-valued maps.
  bool mapAxioms = true;

  /// Free variables of assumptions, goal and probes, in a stable order.
  std::vector<logic::Var> declarations() const;
};

struct Script {
  std::string text;
  /// Declared variables and the SMT symbols chosen for them.
  std::vector<std::pair<logic::Var, std::string>> symbols;
  /// SMT rendering of each probe, in order.
  std::vector<std::string> probeTerms;
};

/// Deterministic SMT-LIB 2.6 rendering. Integer-like sorts become Int,
/// maps become (nested) arrays, and every uint symbol gets a
/// non-negativity assumption (for maps, only when `mapAxioms` is set).
Script emit(const Obligation& o);

/// SMT-LIB term for a single expression (fresh symbol table).
std::string emitTerm(const logic::Expr& e);

} // namespace dcv::solver
