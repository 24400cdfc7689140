#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dcv/frontend/diagnostic.hpp"

namespace dcv::frontend {

enum class ColumnType { Address, UInt, Int, Bool };

std::string_view toString(ColumnType t);
std::optional<ColumnType> columnTypeFromString(std::string_view s);

struct ColumnDecl {
  std::string name;
  ColumnType type = ColumnType::UInt;

  friend bool operator==(const ColumnDecl&, const ColumnDecl&) = default;
};

/// Prefix that marks transaction handler relations.
inline constexpr std::string_view kHandlerPrefix = "recv_";

bool isHandlerName(std::string_view relation);

struct RelationDecl {
  std::string name;
  std::vector<ColumnDecl> columns;
  /// Indices from the `[k1,k2,...]` annotation; empty means "not annotated".
  std::vector<std::size_t> primaryKeys;
  bool singleton = false;
  SourceLoc loc;

  bool isHandler() const { return isHandlerName(name); }
  std::size_t arity() const { return columns.size(); }

  /// Effective key columns: none for singletons, every column when the
  /// relation carries no key annotation.
  std::vector<std::size_t> keyColumns() const;
  std::vector<std::size_t> valueColumns() const;
  /// True when every column is a key (the relation is a set of tuples).
  bool isMembership() const { return !singleton && valueColumns().empty(); }

  friend bool operator==(const RelationDecl& a, const RelationDecl& b) {
    return a.name == b.name && a.columns == b.columns &&
           a.primaryKeys == b.primaryKeys && a.singleton == b.singleton;
  }
};

enum class AnnotationKind { Init, Violation, Public };

std::string_view toString(AnnotationKind k);

struct Annotation {
  AnnotationKind kind = AnnotationKind::Init;
  std::string relation;
  SourceLoc loc;

  friend bool operator==(const Annotation& a, const Annotation& b) {
    return a.kind == b.kind && a.relation == b.relation;
  }
};

/// A variable, wildcard or constant in argument position.
struct Arg {
  enum class Kind { Var, Int, Bool };
  Kind kind = Kind::Var;
  std::string name;       // Var
  std::int64_t value = 0; // Int / Bool (0 or 1)
  bool wildcard = false;  // Var introduced for `_`

  static Arg var(std::string n) { return Arg{Kind::Var, std::move(n), 0, false}; }
  static Arg integer(std::int64_t v) { return Arg{Kind::Int, {}, v, false}; }
  static Arg boolean(bool b) { return Arg{Kind::Bool, {}, b ? 1 : 0, false}; }

  bool isVar() const { return kind == Kind::Var; }
  bool isConst() const { return kind != Kind::Var; }

  friend bool operator==(const Arg&, const Arg&) = default;
};

struct RelationalLit {
  std::string relation;
  std::vector<Arg> args;
  SourceLoc loc;

  friend bool operator==(const RelationalLit& a, const RelationalLit& b) {
    return a.relation == b.relation && a.args == b.args;
  }
};

enum class CmpOp { Gt, Lt, Ge, Le, Ne, Eq };
enum class ArithOp { Add, Sub, Mul, Div };
enum class AggKind { Sum, Max, Min, Count };

std::string_view toString(CmpOp op);
std::string_view toString(ArithOp op);
std::string_view toString(AggKind k);

struct ConditionLit {
  Arg lhs;
  CmpOp op = CmpOp::Eq;
  Arg rhs;
  SourceLoc loc;

  friend bool operator==(const ConditionLit& a, const ConditionLit& b) {
    return a.lhs == b.lhs && a.op == b.op && a.rhs == b.rhs;
  }
};

/// `out = lhs op rhs`
struct FunctionLit {
  std::string out;
  ArithOp op = ArithOp::Add;
  Arg lhs;
  Arg rhs;
  SourceLoc loc;

  friend bool operator==(const FunctionLit& a, const FunctionLit& b) {
    return a.out == b.out && a.op == b.op && a.lhs == b.lhs && a.rhs == b.rhs;
  }
};

/// `out = agg [aggVar]: relation(args)`
struct AggregatorLit {
  std::string out;
  AggKind agg = AggKind::Count;
  std::optional<std::string> aggVar;
  RelationalLit source;
  SourceLoc loc;

  friend bool operator==(const AggregatorLit& a, const AggregatorLit& b) {
    return a.out == b.out && a.agg == b.agg && a.aggVar == b.aggVar &&
           a.source == b.source;
  }
};

using BodyLiteral =
    std::variant<RelationalLit, ConditionLit, FunctionLit, AggregatorLit>;

enum class RuleKind { Unclassified, Transaction, Join, Aggregation, ViolationQuery };

std::string_view toString(RuleKind k);

struct Rule {
  RelationalLit head;
  std::vector<BodyLiteral> body;
  RuleKind kind = RuleKind::Unclassified;
  SourceLoc loc;

  /// Index of the unique `recv_` literal, if any.
  std::optional<std::size_t> triggerIndex() const;
  const RelationalLit* triggerLiteral() const;

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.head == b.head && a.body == b.body;
  }
};

struct Contract {
  std::string name;
  std::vector<RelationDecl> decls;
  std::vector<Annotation> annotations;
  std::vector<Rule> rules;

  const RelationDecl* findDecl(std::string_view relation) const;
  bool hasAnnotation(std::string_view relation, AnnotationKind kind) const;

  friend bool operator==(const Contract& a, const Contract& b) {
    return a.name == b.name && a.decls == b.decls &&
           a.annotations == b.annotations && a.rules == b.rules;
  }
};

/// Environment relations usable in transaction rule bodies without a
/// declaration.
const std::vector<RelationDecl>& builtinRelations();
const RelationDecl* findBuiltin(std::string_view relation);

inline constexpr std::string_view kMsgSender = "msgSender";
inline constexpr std::string_view kMsgValue = "msgValue";

} // namespace dcv::frontend
