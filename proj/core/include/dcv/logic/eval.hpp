#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "dcv/logic/expr.hpp"

namespace dcv::logic {

struct MapData;

/// Concrete value of a bool, integer-like or map sort.
class Value {
public:
  Value() : v_(false) {}
  static Value boolean(bool b) { return Value(Payload(b)); }
  static Value integer(std::int64_t i) { return Value(Payload(i)); }
  /// Map with explicit entries; keys absent from `entries` read as `dflt`.
  static Value map(std::map<std::vector<std::int64_t>, Value> entries, Value dflt);

  bool isBool() const { return std::holds_alternative<bool>(v_); }
  bool isInt() const { return std::holds_alternative<std::int64_t>(v_); }
  bool isMap() const { return std::holds_alternative<std::shared_ptr<const MapData>>(v_); }

  bool asBool() const { return std::get<bool>(v_); }
  std::int64_t asInt() const { return std::get<std::int64_t>(v_); }
  const MapData& asMap() const { return *std::get<std::shared_ptr<const MapData>>(v_); }

  /// Scalar as key component (bools become 0/1).
  std::int64_t scalar() const { return isBool() ? (asBool() ? 1 : 0) : asInt(); }

  Value read(const std::vector<std::int64_t>& key) const;
  Value write(const std::vector<std::int64_t>& key, Value v) const;

  std::string toString() const;

private:
  using Payload = std::variant<bool, std::int64_t, std::shared_ptr<const MapData>>;
  explicit Value(Payload p) : v_(std::move(p)) {}
  Payload v_;
};

struct MapData {
  std::map<std::vector<std::int64_t>, Value> entries;
  Value dflt;
};

/// Finite carrier sets used for quantifiers and map equality. Sorts that
/// are not listed make quantifiers over them unevaluable.
struct FiniteDomain {
  std::map<SortKind, std::vector<std::int64_t>> values;

  const std::vector<std::int64_t>* of(const Sort& s) const;
};

/// Assignment keyed by Var::key().
using Env = std::unordered_map<std::string, Value>;

class EvalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Three-valued evaluation: std::nullopt when the value depends on an
/// unassigned variable. Connectives follow Kleene logic.
std::optional<Value> evaluatePartial(const Expr& e, const Env& env, const FiniteDomain& dom);

/// Total evaluation; throws EvalError if a variable is unassigned.
Value evaluate(const Expr& e, const Env& env, const FiniteDomain& dom = {});

bool equalValues(const Value& a, const Value& b, const Sort& s, const FiniteDomain& dom);

} // namespace dcv::logic
