#include "dcv/frontend/ast.hpp"

#include <algorithm>
#include <numeric>

namespace dcv::frontend {

std::string_view toString(ColumnType t) {
  switch (t) {
  case ColumnType::Address: return "address";
  case ColumnType::UInt: return "uint";
  case ColumnType::Int: return "int";
  case ColumnType::Bool: return "bool";
  }
  return "?";
}

std::optional<ColumnType> columnTypeFromString(std::string_view s) {
  if (s == "address") return ColumnType::Address;
  if (s == "uint") return ColumnType::UInt;
  if (s == "int") return ColumnType::Int;
  if (s == "bool") return ColumnType::Bool;
  return std::nullopt;
}

bool isHandlerName(std::string_view relation) {
  return relation.size() > kHandlerPrefix.size() &&
         relation.substr(0, kHandlerPrefix.size()) == kHandlerPrefix;
}

std::vector<std::size_t> RelationDecl::keyColumns() const {
  if (singleton) return {};
  if (!primaryKeys.empty()) return primaryKeys;
  std::vector<std::size_t> all(columns.size());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

std::vector<std::size_t> RelationDecl::valueColumns() const {
  auto keys = keyColumns();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (std::find(keys.begin(), keys.end(), i) == keys.end()) out.push_back(i);
  return out;
}

std::string_view toString(AnnotationKind k) {
  switch (k) {
  case AnnotationKind::Init: return "init";
  case AnnotationKind::Violation: return "violation";
  case AnnotationKind::Public: return "public";
  }
  return "?";
}

std::string_view toString(CmpOp op) {
  switch (op) {
  case CmpOp::Gt: return ">";
  case CmpOp::Lt: return "<";
  case CmpOp::Ge: return ">=";
  case CmpOp::Le: return "<=";
  case CmpOp::Ne: return "!=";
  case CmpOp::Eq: return "==";
  }
  return "?";
}

std::string_view toString(ArithOp op) {
  switch (op) {
  case ArithOp::Add: return "+";
  case ArithOp::Sub: return "-";
  case ArithOp::Mul: return "*";
  case ArithOp::Div: return "/";
  }
  return "?";
}

std::string_view toString(AggKind k) {
  switch (k) {
  case AggKind::Sum: return "sum";
  case AggKind::Max: return "max";
  case AggKind::Min: return "min";
  case AggKind::Count: return "count";
  }
  return "?";
}

std::string_view toString(RuleKind k) {
  switch (k) {
  case RuleKind::Unclassified: return "unclassified";
  case RuleKind::Transaction: return "transaction";
  case RuleKind::Join: return "join";
  case RuleKind::Aggregation: return "aggregation";
  case RuleKind::ViolationQuery: return "violationQuery";
  }
  return "?";
}

std::optional<std::size_t> Rule::triggerIndex() const {
  for (std::size_t i = 0; i < body.size(); ++i)
    if (auto* lit = std::get_if<RelationalLit>(&body[i]); lit && isHandlerName(lit->relation))
      return i;
  return std::nullopt;
}

const RelationalLit* Rule::triggerLiteral() const {
  auto idx = triggerIndex();
  return idx ? &std::get<RelationalLit>(body[*idx]) : nullptr;
}

const RelationDecl* Contract::findDecl(std::string_view relation) const {
  for (const auto& d : decls)
    if (d.name == relation) return &d;
  return nullptr;
}

bool Contract::hasAnnotation(std::string_view relation, AnnotationKind kind) const {
  return std::any_of(annotations.begin(), annotations.end(), [&](const Annotation& a) {
    return a.kind == kind && a.relation == relation;
  });
}

const std::vector<RelationDecl>& builtinRelations() {
  static const std::vector<RelationDecl> builtins = {
      RelationDecl{std::string(kMsgSender), {{"v", ColumnType::Address}}, {}, false, {}},
      RelationDecl{std::string(kMsgValue), {{"v", ColumnType::UInt}}, {}, false, {}},
  };
  return builtins;
}

const RelationDecl* findBuiltin(std::string_view relation) {
  for (const auto& b : builtinRelations())
    if (b.name == relation) return &b;
  return nullptr;
}

} // namespace dcv::frontend
