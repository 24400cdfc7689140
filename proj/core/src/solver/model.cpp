#include "dcv/solver/model.hpp"

#include <cctype>

namespace dcv::solver {

using namespace logic;

std::string SExpr::toString() const {
  if (!isList) return atom;
  std::string out = "(";
  for (std::size_t i = 0; i < list.size(); ++i) out += (i ? " " : "") + list[i].toString();
  return out + ")";
}

std::optional<std::vector<SExpr>> parseSExprs(std::string_view text) {
  std::vector<SExpr> stack(1);
  stack[0].isList = true;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '(') {
      SExpr l;
      l.isList = true;
      stack.push_back(std::move(l));
      ++i;
    } else if (c == ')') {
      if (stack.size() == 1) return std::nullopt;
      SExpr done = std::move(stack.back());
      stack.pop_back();
      stack.back().list.push_back(std::move(done));
      ++i;
    } else if (c == '|' || c == '"') {
      std::size_t end = text.find(c, i + 1);
      if (end == std::string_view::npos) return std::nullopt;
      SExpr a;
      a.atom = std::string(text.substr(i, end - i + 1));
      stack.back().list.push_back(std::move(a));
      i = end + 1;
    } else {
      std::size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '(' &&
             text[i] != ')' && text[i] != ';')
        ++i;
      SExpr a;
      a.atom = std::string(text.substr(start, i - start));
      stack.back().list.push_back(std::move(a));
    }
  }
  if (stack.size() != 1) return std::nullopt;
  return std::move(stack[0].list);
}

namespace {

std::optional<std::int64_t> decodeInt(const SExpr& s) {
  try {
    if (!s.isList) {
      std::size_t pos = 0;
      long long v = std::stoll(s.atom, &pos);
      if (pos != s.atom.size()) return std::nullopt;
      return v;
    }
    if (s.list.size() == 2 && !s.list[0].isList && s.list[0].atom == "-") {
      auto v = decodeInt(s.list[1]);
      if (v) return -*v;
    }
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

std::optional<Value> decodeScalar(const SExpr& s, const Sort& sort) {
  if (sort.isBool()) {
    if (!s.isList && (s.atom == "true" || s.atom == "false")) return Value::boolean(s.atom == "true");
    return std::nullopt;
  }
  if (auto v = decodeInt(s)) return Value::integer(*v);
  return std::nullopt;
}

// Arrays decoded level by level: keys of sorts[depth..] remain.
std::optional<Value> decodeArray(const SExpr& s, const std::vector<Sort>& keys, const Sort& valueSort,
                                 std::size_t depth) {
  if (depth == keys.size()) return decodeScalar(s, valueSort);
  if (!s.isList || s.list.empty()) return std::nullopt;
  // ((as const T) v)
  if (s.list.size() == 2 && s.list[0].isList && s.list[0].list.size() == 3 &&
      s.list[0].list[0].atom == "as" && s.list[0].list[1].atom == "const") {
    auto inner = decodeArray(s.list[1], keys, valueSort, depth + 1);
    if (!inner) return std::nullopt;
    if (depth + 1 == keys.size()) return Value::map({}, *inner);
    // Only inner arrays without explicit entries flatten to one default.
    if (!inner->asMap().entries.empty()) return std::nullopt;
    return Value::map({}, inner->asMap().dflt);
  }
  // (store a k v)
  if (s.list.size() == 4 && !s.list[0].isList && s.list[0].atom == "store") {
    auto base = decodeArray(s.list[1], keys, valueSort, depth);
    auto k = decodeScalar(s.list[2], keys[depth]);
    if (!base || !k) return std::nullopt;
    if (depth + 1 == keys.size()) {
      auto v = decodeScalar(s.list[3], valueSort);
      if (!v) return std::nullopt;
      return base->write({k->scalar()}, *v);
    }
    auto inner = decodeArray(s.list[3], keys, valueSort, depth + 1);
    if (!inner) return std::nullopt;
    if (!(inner->asMap().dflt.scalar() == base->asMap().dflt.scalar())) return std::nullopt;
    auto out = *base;
    for (const auto& [ik, iv] : inner->asMap().entries) {
      std::vector<std::int64_t> full{k->scalar()};
      full.insert(full.end(), ik.begin(), ik.end());
      out = out.write(full, iv);
    }
    return out;
  }
  return std::nullopt;
}

} // namespace

std::optional<Value> decodeValue(const SExpr& s, const Sort& sort) {
  if (sort.isMap()) return decodeArray(s, sort.keys(), sort.value(), 0);
  return decodeScalar(s, sort);
}

Env Model::env() const {
  Env out;
  for (const auto& [k, e] : entries)
    if (e.value) out.emplace(k, *e.value);
  return out;
}

Model parseModel(const SExpr& response, const std::vector<std::pair<Var, std::string>>& symbols) {
  Model m;
  if (!response.isList) return m;
  std::map<std::string, const Var*> bySymbol;
  for (const auto& [v, sym] : symbols) bySymbol.emplace(sym, &v);
  std::size_t start = 0;
  if (!response.list.empty() && !response.list[0].isList && response.list[0].atom == "model") start = 1;
  for (std::size_t i = start; i < response.list.size(); ++i) {
    const SExpr& d = response.list[i];
    if (!d.isList || d.list.size() != 5 || d.list[0].atom != "define-fun") continue;
    if (!d.list[2].isList || !d.list[2].list.empty()) continue; // functions with arguments
    auto it = bySymbol.find(d.list[1].atom);
    if (it == bySymbol.end()) continue;
    Model::Entry e{d.list[4].toString(), decodeValue(d.list[4], it->second->sort)};
    m.entries[it->second->key()] = std::move(e);
  }
  return m;
}

} // namespace dcv::solver
