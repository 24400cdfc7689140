#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dcv/inference/predicates.hpp"
#include "dcv/logic/expr.hpp"

namespace dcv::inference {

/// A literal of a candidate: a predicate or its negation.
struct SignedPredicate {
  Predicate pred;
  bool positive = true;

  logic::Expr formula() const { return positive ? pred.formula : logic::mkNot(pred.formula); }
};

struct Candidate {
  /// 1: ∀X. ¬init ⟹ ¬p;  2: ∀X. ¬init ∧ q ⟹ ¬p.
  int pattern = 1;
  SignedPredicate p;
  std::optional<SignedPredicate> q;
  logic::Expr closedForm;
  /// True when the premise contains ¬init, making the base case valid.
  bool initGuarded = true;

  std::string text() const { return logic::toString(closedForm); }
};

struct CandidateOptions {
  bool pattern1 = true;
  bool pattern2 = true;
  /// Emit both polarities of every predicate.
  bool polarity = true;
};

/// Name under which the zero-initialization formula appears in candidates.
inline constexpr const char* kInitName = "init";

/// `init` abbreviation used in candidate premises.
logic::Expr initAbbreviation(const logic::Expr& initDefaults);

std::vector<Candidate> generateCandidates(const std::vector<Predicate>& P,
                                          const logic::Expr& initDefaults,
                                          const CandidateOptions& opts = {});

/// Wraps an arbitrary closed formula (no ¬init guard) as a candidate.
Candidate plainCandidate(const logic::Expr& formula);

} // namespace dcv::inference
