#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dcv::logic {

enum class SortKind { Bool, Int, UInt, Addr, Map };

/// Raised when a term is built from operands of incompatible sorts.
class SortError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class Sort {
public:
  Sort() = default;

  static Sort boolean() { return Sort(SortKind::Bool); }
  static Sort integer() { return Sort(SortKind::Int); }
  static Sort uinteger() { return Sort(SortKind::UInt); }
  static Sort address() { return Sort(SortKind::Addr); }
  /// Map from a key tuple to a scalar value; throws SortError on empty keys
  /// or map-valued range.
  static Sort map(std::vector<Sort> keys, Sort value);

  SortKind kind() const { return kind_; }
  bool isBool() const { return kind_ == SortKind::Bool; }
  bool isMap() const { return kind_ == SortKind::Map; }
  bool isNumeric() const { return kind_ == SortKind::Int || kind_ == SortKind::UInt; }
  /// Represented as an SMT integer.
  bool isIntegral() const { return isNumeric() || kind_ == SortKind::Addr; }

  /// Key sorts of a map; empty for scalars.
  std::vector<Sort> keys() const;
  const Sort& value() const;

  std::string toString() const;

  friend bool operator==(const Sort& a, const Sort& b) {
    return a.kind_ == b.kind_ && a.args_ == b.args_;
  }
  friend bool operator<(const Sort& a, const Sort& b) {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
    return a.args_ < b.args_;
  }

private:
  explicit Sort(SortKind k) : kind_(k) {}

  SortKind kind_ = SortKind::Bool;
  std::vector<Sort> args_; // map: keys..., value
};

/// Sorts that may be compared for equality: numeric sorts mix, everything
/// else must match exactly.
bool compatible(const Sort& a, const Sort& b);

} // namespace dcv::logic
