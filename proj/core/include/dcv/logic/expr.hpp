#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "dcv/logic/sort.hpp"

namespace dcv::logic {

enum class VarRole {
  State, ///< a state variable of the transition system
  Param, ///< a transaction parameter
  Local, ///< anything else: rule variables, quantified variables
};

struct Var {
  std::string name;
  Sort sort;
  VarRole role = VarRole::Local;
  bool primed = false;

  /// Name as printed and as used for environments: primed state variables
  /// carry a trailing `'`, which no DeCon identifier can contain.
  std::string key() const { return primed ? name + "'" : name; }

  friend bool operator==(const Var& a, const Var& b) {
    return a.name == b.name && a.primed == b.primed && a.role == b.role && a.sort == b.sort;
  }
  friend bool operator<(const Var& a, const Var& b) {
    if (a.name != b.name) return a.name < b.name;
    if (a.primed != b.primed) return a.primed < b.primed;
    if (a.role != b.role) return a.role < b.role;
    return a.sort < b.sort;
  }
};

enum class Op {
  Var,
  BoolConst,
  IntConst,
  Add,
  Sub,
  Mul,
  Div,
  Select,
  Store,
  ConstMap,
  Ite,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Not,
  And,
  Or,
  Implies,
  Xor,
  Forall,
  Exists,
  /// Abbreviation: prints as its name, means its body.
  Named,
};

struct Node;

/// Immutable, shared expression. Terms and formulas share this type; a
/// formula is an expression of sort bool.
class Expr {
public:
  Expr() = default;

  Op op() const;
  const Sort& sort() const;
  const std::vector<Expr>& kids() const;
  const Expr& kid(std::size_t i) const { return kids()[i]; }
  /// Var payload (op() == Op::Var).
  const Var& var() const;
  std::int64_t value() const;
  bool boolValue() const { return value() != 0; }
  /// Quantified variables (Forall / Exists).
  const std::vector<Var>& bound() const;
  /// Name of a Named abbreviation.
  const std::string& name() const;

  bool isNull() const { return !node_; }
  bool isTrue() const;
  bool isFalse() const;

  /// Deep structural equality.
  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }
  std::size_t hash() const;

  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  const Node* node() const { return node_.get(); }

private:
  std::shared_ptr<const Node> node_;
};

struct Node {
  Op op = Op::BoolConst;
  Sort sort;
  std::vector<Expr> kids;
  Var var;
  std::int64_t value = 0;
  std::vector<Var> bound;
  std::string name;
  std::size_t hash = 0;
};

// Constructors. Each checks operand sorts and throws SortError on mismatch.
Expr mkVar(const Var& v);
Expr mkBool(bool b);
Expr mkTrue();
Expr mkFalse();
Expr mkInt(std::int64_t v, Sort s = Sort::uinteger());

Expr mkAdd(const Expr& a, const Expr& b);
Expr mkSub(const Expr& a, const Expr& b);
Expr mkMul(const Expr& a, const Expr& b);
/// Integer division with solver semantics (floor toward -inf for positive
/// divisors, SMT-LIB `div`).
Expr mkDiv(const Expr& a, const Expr& b);

Expr mkSelect(const Expr& map, const std::vector<Expr>& keys);
Expr mkStore(const Expr& map, const std::vector<Expr>& keys, const Expr& value);
Expr mkConstMap(const Sort& mapSort, const Expr& value);
Expr mkIte(const Expr& c, const Expr& t, const Expr& e);

Expr mkEq(const Expr& a, const Expr& b);
Expr mkNe(const Expr& a, const Expr& b);
Expr mkLt(const Expr& a, const Expr& b);
Expr mkLe(const Expr& a, const Expr& b);
Expr mkGt(const Expr& a, const Expr& b);
Expr mkGe(const Expr& a, const Expr& b);

Expr mkNot(const Expr& a);
Expr mkAnd(const std::vector<Expr>& xs);
Expr mkAnd(const Expr& a, const Expr& b);
Expr mkOr(const std::vector<Expr>& xs);
Expr mkOr(const Expr& a, const Expr& b);
Expr mkImplies(const Expr& a, const Expr& b);
Expr mkXor(const Expr& a, const Expr& b);
/// Variables that do not occur free in the body are dropped.
Expr mkForall(std::vector<Var> vars, const Expr& body);
Expr mkExists(std::vector<Var> vars, const Expr& body);
Expr mkNamed(std::string name, const Expr& body);

/// Default value of a scalar sort: false or 0.
Expr defaultValue(const Sort& s);

using VarSet = std::set<Var>;
using Substitution = std::map<Var, Expr>;

VarSet freeVars(const Expr& e);
/// Replace every unprimed state variable with its primed twin. Throws
/// std::logic_error if `e` already contains a primed state variable.
Expr prime(const Expr& e);
/// Capture-avoiding substitution. Throws SortError if a replacement's sort
/// is incompatible with the variable it replaces.
Expr substitute(const Expr& e, const Substitution& sigma);
/// Inline Named abbreviations.
Expr expandNamed(const Expr& e);

/// Split a conjunction into its conjuncts (a non-conjunction is one conjunct).
std::vector<Expr> conjuncts(const Expr& e);

/// Stable infix rendering: prefix quantifiers, `m[k1,k2]` map reads.
std::string toString(const Expr& e);

} // namespace dcv::logic

template <>
struct std::hash<dcv::logic::Expr> {
  std::size_t operator()(const dcv::logic::Expr& e) const { return e.hash(); }
};
