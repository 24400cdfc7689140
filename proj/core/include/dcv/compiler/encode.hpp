#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dcv/frontend/validate.hpp"
#include "dcv/logic/state_space.hpp"
#include "dcv/logic/transition_system.hpp"

namespace dcv::compiler {

/// Reserved nullary relation used when encoding violation queries: no body
/// literal matches it, so every literal reads the current state.
inline constexpr std::string_view kCheckRelation = "check";

/// The newly inserted tuple that fires a rule.
struct Trigger {
  std::string relation;
  std::vector<logic::Expr> args;

  static Trigger check() { return {std::string(kCheckRelation), {}}; }
  bool isCheck() const { return relation == kCheckRelation; }
};

/// Hands out identifiers that do not clash with anything already used in
/// the current formula (state variables, params, other rules' locals).
class NameScope {
public:
  void reserve(const std::string& name) { used_.insert(name); }
  bool taken(const std::string& name) const { return used_.count(name) != 0; }
  std::string fresh(const std::string& base);

private:
  std::set<std::string> used_;
};

enum class BindMode {
  /// Variables are replaced by the first term they are equated with.
  Eager,
  /// Every variable becomes a local and each literal yields its own
  /// equalities; used for predicate extraction.
  Explicit,
};

struct BodyEncoding {
  /// Encoded literals, in processing order; literals that encode to `true`
  /// are dropped.
  std::vector<logic::Expr> atoms;
  /// Body-literal index each atom came from.
  std::vector<std::size_t> origin;
  /// Variables left unbound, existentially quantified over the body.
  std::vector<logic::Var> locals;
  /// DeCon variable name → term.
  std::map<std::string, logic::Expr> bindings;

  logic::Expr matrix() const { return logic::mkAnd(atoms); }
  logic::Expr formula() const { return logic::mkExists(locals, matrix()); }
};

struct RuleEncoding {
  logic::Expr formula;
  /// ∃locals. Body of the rule itself.
  logic::Expr guard;
  /// Head relations written in the rule tree, in encoding order (a
  /// relation occurs more than once if it is written more than once).
  std::vector<std::string> writes;
};

/// Transaction parameters coming from the environment rather than from the
/// handler literal.
struct EnvParams {
  std::optional<logic::Var> sender;
  std::optional<logic::Var> value;
};

/// Encodes rules of one contract. Not thread-safe; use one per thread.
class Encoder {
public:
  Encoder(const frontend::ValidatedContract& c, const logic::StateSpace& gamma);

  /// Starts a new formula: forgets all allocated names and env params.
  void resetScope();
  NameScope& names() { return names_; }
  const EnvParams& env() const { return env_; }

  BodyEncoding encodeRuleBody(std::size_t rule, const Trigger& tau,
                              BindMode mode = BindMode::Eager);
  RuleEncoding encodeDeConRule(std::size_t rule, const Trigger& tau);
  logic::Transition encodeTransaction(std::size_t rule);
  logic::Property encodeProperty(std::size_t rule, std::string name);

  /// Head update `H' = H.insert(args)` for relation `rel`.
  logic::Expr update(const std::string& rel, const std::vector<logic::Expr>& args) const;
  /// `v' = v` for every state variable of `rel`.
  logic::Expr frame(const std::string& rel) const;

  const frontend::Diagnostics& diagnostics() const { return diags_; }

private:
  logic::Expr constant(const frontend::Arg& a, const logic::Sort& s) const;
  const logic::Var& envParam(std::string_view builtin);
  void error(frontend::SourceLoc loc, std::string msg);

  const frontend::ValidatedContract& c_;
  const logic::StateSpace& gamma_;
  NameScope names_;
  EnvParams env_;
  frontend::Diagnostics diags_;
};

} // namespace dcv::compiler
