#include "dcv/logic/sort.hpp"

namespace dcv::logic {

Sort Sort::map(std::vector<Sort> keys, Sort value) {
  if (keys.empty()) throw SortError("map sort needs at least one key sort");
  if (value.isMap()) throw SortError("map sort cannot have a map-valued range");
  for (const auto& k : keys)
    if (k.isMap()) throw SortError("map keys must be scalar");
  Sort s(SortKind::Map);
  s.args_ = std::move(keys);
  s.args_.push_back(std::move(value));
  return s;
}

std::vector<Sort> Sort::keys() const {
  if (!isMap()) return {};
  return {args_.begin(), args_.end() - 1};
}

const Sort& Sort::value() const {
  if (!isMap()) throw SortError("value() on scalar sort " + toString());
  return args_.back();
}

std::string Sort::toString() const {
  switch (kind_) {
  case SortKind::Bool: return "bool";
  case SortKind::Int: return "int";
  case SortKind::UInt: return "uint";
  case SortKind::Addr: return "address";
  case SortKind::Map: {
    std::string out;
    auto ks = keys();
    if (ks.size() > 1) out += "(";
    for (std::size_t i = 0; i < ks.size(); ++i) {
      if (i) out += " × ";
      out += ks[i].toString();
    }
    if (ks.size() > 1) out += ")";
    return out + " ↦ " + value().toString();
  }
  }
  return "?";
}

bool compatible(const Sort& a, const Sort& b) {
  if (a.isNumeric() && b.isNumeric()) return true;
  if (a.kind() != b.kind()) return false;
  if (!a.isMap()) return true;
  auto ka = a.keys(), kb = b.keys();
  if (ka.size() != kb.size()) return false;
  for (std::size_t i = 0; i < ka.size(); ++i)
    if (!compatible(ka[i], kb[i])) return false;
  return compatible(a.value(), b.value());
}

} // namespace dcv::logic
