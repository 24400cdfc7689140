#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dcv/logic/eval.hpp"
#include "dcv/logic/expr.hpp"

namespace dcv::solver {

/// Parsed S-expression: an atom or a list.
struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool isList = false;

  std::string toString() const;
};

/// Parses a sequence of S-expressions. Returns std::nullopt on unbalanced
/// parentheses or unterminated quoted symbols/strings.
std::optional<std::vector<SExpr>> parseSExprs(std::string_view text);

/// Assignment read back from a solver. Every entry keeps the solver's text;
/// values of supported shapes (booleans, integers, constant arrays with
/// stores) are also decoded.
struct Model {
  struct Entry {
    std::string text;
    std::optional<logic::Value> value;
  };
  /// Keyed by Var::key() for declared variables.
  std::map<std::string, Entry> entries;

  bool empty() const { return entries.empty(); }
  /// Decoded values only, usable as an evaluation environment.
  logic::Env env() const;
};

/// Decode a value S-expression of the given sort.
std::optional<logic::Value> decodeValue(const SExpr& s, const logic::Sort& sort);

/// Read `(define-fun name () Sort value)` entries of a get-model response
/// (with or without the legacy `model` head) for the given symbol table.
Model parseModel(const SExpr& response,
                 const std::vector<std::pair<logic::Var, std::string>>& symbols);

} // namespace dcv::solver
