#pragma once

#include <cstddef>

#include "dcv/solver/smtlib.hpp"

namespace dcv::solver {

struct GroundOptions {
  /// Upper bound on the instances of one quantifier; the instance list is
  /// truncated deterministically beyond it.
  std::size_t maxInstances = 2048;
  /// Nesting depth of quantifiers that are still instantiated; deeper
  /// ones are dropped.
  int maxDepth = 3;
};

struct GroundStats {
  std::size_t universals = 0;
  std::size_t instances = 0;
  std::size_t skolems = 0;
  bool truncated = false;
};

/// Quantifier-free weakening of an obligation.
///
/// Existentials in positive position (and universals in negative position)
/// are skolemized with fresh constants. Every other quantifier is replaced
/// by instances over index terms: a bound variable ranges over the ground
/// terms found at the same key position of the same relation (primed or
/// not), or over all ground terms of its sort when it never appears as a
/// key. Quantified non-negativity axioms of uint-valued maps are replaced
/// by their instances at the ground key tuples.
///
/// The result entails nothing the input does not: if the grounded
/// obligation is valid, so is the original. A counterexample to the
/// grounded obligation may be spurious.
Obligation ground(const Obligation& o, const GroundOptions& opts = {}, GroundStats* stats = nullptr);

} // namespace dcv::solver
