#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcv/frontend/validate.hpp"
#include "dcv/inference/candidates.hpp"
#include "dcv/inference/predicates.hpp"
#include "dcv/logic/transition_system.hpp"
#include "dcv/solver/process.hpp"

namespace dcv::inference {

struct VerifierConfig {
  solver::SolverConfig solver;
  /// Wall-clock budget for one property.
  std::chrono::seconds budget{3600};
  CandidateOptions candidates;
  ExtractOptions extraction;
  /// Check several candidates per query instead of one per candidate.
  bool batched = true;
  /// Candidates per batched query (0: all live candidates at once).
  std::size_t batchSize = 16;
  /// Prefix of obligation names (and dumped script names).
  std::string namePrefix = "dcv";
};

struct Stats {
  std::size_t queries = 0;
  std::size_t predicates = 0;
  std::size_t candidates = 0;
  std::size_t survivors = 0;
  std::size_t rounds = 0;
  double seconds = 0;
};

/// A solver that could not be run or answered nonsense.
class SolverFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class BudgetExhausted : public std::runtime_error {
public:
  BudgetExhausted() : std::runtime_error("time budget exhausted") {}
};

/// Issues obligations against a deadline and counts them.
class SolverSession {
public:
  SolverSession(const VerifierConfig& cfg, Stats& stats);

  /// Unknown answers are returned; process errors throw SolverFailure and
  /// an exhausted budget throws BudgetExhausted.
  solver::SolverResult run(const solver::Obligation& o);
  std::string name(const std::string& suffix) const { return cfg_.namePrefix + "." + suffix; }
  const VerifierConfig& config() const { return cfg_; }

private:
  const VerifierConfig& cfg_;
  Stats& stats_;
  std::chrono::steady_clock::time_point deadline_;
};

/// True iff `inv` is not implied by init, or is not preserved by a
/// step from a state satisfying every candidate in C and the property.
/// Solver "unknown" counts as refuted.
bool refuteInvariant(const Candidate& inv, const std::vector<Candidate>& C,
                     const logic::TransitionSystem& ts, const logic::Expr& prop,
                     SolverSession& session);

struct HoudiniResult {
  /// Indices into the input candidate list.
  std::vector<std::size_t> survivors;
  /// Refuted candidates in removal order.
  std::vector<std::size_t> refuted;
  std::size_t rounds = 0;
  std::vector<std::string> trace;
};

/// Greatest subset of C that is inductive relative to `prop`.
HoudiniResult findInductiveInvariant(const std::vector<Candidate>& C, const logic::TransitionSystem& ts,
                                     const logic::Expr& prop, SolverSession& session);

struct Verdict {
  enum class Kind { Verified, Unknown, InputError };
  enum class Reason { None, FailedBase, NoInductiveStrengthening, SolverUnknown, Timeout };

  Kind kind = Kind::Unknown;
  Reason reason = Reason::None;
  std::string property;
  /// Verified: the inductive invariant (including the property).
  logic::Expr invariant;
  /// True when plain induction sufficed.
  bool plainInduction = false;
  std::vector<std::string> survivors;
  std::vector<std::string> refuted;
  /// Set when a solver process failed (as opposed to answering unknown).
  bool solverError = false;
  std::string detail;
  /// State-pair model of the last failing obligation, when available.
  std::optional<solver::Model> model;
  Stats stats;
  std::vector<std::string> trace;

  bool verified() const { return kind == Kind::Verified; }
};

std::string_view toString(Verdict::Kind k);
std::string_view toString(Verdict::Reason r);

/// Inductive check of `prop`, strengthened by inferred invariants.
/// `candidates` is only called when plain induction fails.
Verdict verifyProperty(const logic::TransitionSystem& ts, const logic::Property& prop,
                       const std::function<std::vector<Candidate>()>& candidates,
                       const VerifierConfig& cfg);

/// Candidates from the contract's transaction rules.
Verdict verifyProperty(const frontend::ValidatedContract& c, const logic::TransitionSystem& ts,
                       const logic::Property& prop, const VerifierConfig& cfg);

/// Candidates used for a contract, with the predicate count.
std::vector<Candidate> contractCandidates(const frontend::ValidatedContract& c,
                                          const logic::TransitionSystem& ts,
                                          const VerifierConfig& cfg, std::size_t* predicates = nullptr);

/// The obligations of the two plain checks (base, induction), for dumping.
std::vector<solver::Obligation> plainObligations(const logic::TransitionSystem& ts,
                                                 const logic::Property& prop, const std::string& prefix);

} // namespace dcv::inference
