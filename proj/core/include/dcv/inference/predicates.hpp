#pragma once

#include <string>
#include <vector>

#include "dcv/frontend/validate.hpp"
#include "dcv/logic/expr.hpp"
#include "dcv/logic/state_space.hpp"

namespace dcv::inference {

struct Predicate {
  /// Over state variables and `locals` only.
  logic::Expr formula;
  /// Free local variables, in canonical order.
  std::vector<logic::Var> locals;
  std::size_t rule = 0;
  /// Body literal indices the predicate was built from.
  std::vector<std::size_t> literals;

  std::string text() const { return logic::toString(formula); }
};

struct ExtractOptions {
  /// Drop P0 members that mention no constant (they are still used to
  /// build conjunctions).
  bool dropConstantFree = false;
  /// Also extract from the rules a transaction triggers, read against the
  /// current state.
  bool includeDependents = true;
};

/// Predicates of one rule read under `trigger` semantics: P0 (one per
/// state-reading literal) plus P1 (pairs sharing a rule variable).
/// Predicates mentioning transaction parameters are dropped, local
/// definitions `x = t` are inlined, and locals are renamed canonically.
std::vector<Predicate> extractPredicates(const frontend::ValidatedContract& c,
                                         const logic::StateSpace& gamma, std::size_t rule,
                                         const ExtractOptions& opts = {});

/// Union over all transaction rules (and, optionally, the rules they
/// trigger), deduplicated structurally, in first-seen order.
std::vector<Predicate> extractAllPredicates(const frontend::ValidatedContract& c,
                                            const logic::StateSpace& gamma,
                                            const ExtractOptions& opts = {});

/// Inline `local = term` conjuncts and boolean locals asserted true;
/// conjunct order is normalized.
logic::Expr simplifyPredicate(const logic::Expr& e);

/// Rename locals to u, u1, ... (uint), a, a1, ... (address), i, ... (int),
/// b, ... (bool) in order of first occurrence.
Predicate canonicalize(const logic::Expr& e, std::size_t rule, std::vector<std::size_t> literals);

} // namespace dcv::inference
