#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dcv/logic/expr.hpp"
#include "dcv/logic/state_space.hpp"

namespace dcv::logic {

struct Transition {
  std::string name;
  std::vector<Var> params;
  /// Over unprimed and primed state variables, params and (bound) locals.
  Expr formula;
  /// Guard of the transaction rule itself; when false the step stutters.
  Expr guard;
  /// Index of the originating transaction rule.
  std::size_t rule = 0;
  /// State variables assigned on some path of the rule tree.
  std::vector<std::string> writes;
};

struct Property {
  std::string name;
  Expr formula;
  std::size_t rule = 0;
};

struct TransitionSystem {
  std::vector<StateVar> stateVars;
  /// Initial states, including non-negativity of uint state.
  Expr init;
  /// The zero-initialization part of `init` alone.
  Expr initDefaults;
  std::vector<Transition> transitions;
  std::vector<Property> properties;

  /// Disjunction of all transition formulas.
  Expr tr() const;
  /// Union of the params of every transition, deduplicated.
  std::vector<Var> allParams() const;
  /// Checks the free-variable invariants; returns a message on failure.
  std::optional<std::string> checkWellFormed() const;
};

/// Non-negativity of every uint-valued state variable (maps: ∀ keys).
Expr uintConstraints(const std::vector<StateVar>& vars, bool primed = false);

/// Stable text dump: state vars with sorts, init, transitions, properties.
std::string dump(const TransitionSystem& ts);

} // namespace dcv::logic
