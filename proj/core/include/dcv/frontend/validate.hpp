#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dcv/frontend/ast.hpp"
#include "dcv/frontend/parser.hpp"

namespace dcv::frontend {

/// A contract that passed every semantic check. Rule kinds are assigned and
/// per-rule variable types are known.
class ValidatedContract {
public:
  const Contract& contract() const { return contract_; }
  const std::string& name() const { return contract_.name; }
  const std::vector<Rule>& rules() const { return contract_.rules; }

  /// Declared relation or builtin; throws std::out_of_range for unknown names.
  const RelationDecl& relation(std::string_view name) const;
  bool isDeclared(std::string_view name) const;

  /// Declared relations excluding handlers and builtins.
  std::vector<const RelationDecl*> stateRelations() const;

  std::vector<std::size_t> transactionRules() const;
  std::vector<std::size_t> violationRules() const;

  /// Rules that have a literal of `relation` in their body (relational or
  /// aggregator source). Violation queries are excluded.
  std::vector<std::size_t> rulesReading(std::string_view relation) const;
  /// Rules that are re-evaluated when rule `r`'s head is inserted.
  std::vector<std::size_t> dependentRules(std::size_t r) const;

  /// Relations that appear in some rule head.
  const std::set<std::string>& writtenRelations() const { return written_; }

  /// Type of a variable occurring in rule `r`.
  ColumnType varType(std::size_t r, const std::string& var) const;

private:
  friend Checked<ValidatedContract> validate(Contract c);

  Contract contract_;
  std::map<std::string, std::size_t, std::less<>> declIndex_;
  std::vector<std::map<std::string, ColumnType>> varTypes_;
  std::set<std::string> written_;
};

Checked<ValidatedContract> validate(Contract c);

} // namespace dcv::frontend
