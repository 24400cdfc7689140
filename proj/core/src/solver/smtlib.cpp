#include "dcv/solver/smtlib.hpp"

#include <cctype>
#include <map>
#include <stdexcept>
#include <set>
#include <sstream>

namespace dcv::solver {

using namespace logic;

std::vector<Var> Obligation::declarations() const {
  VarSet all;
  auto addAll = [&](const Expr& e) {
    if (e.isNull()) return;
    for (const auto& v : freeVars(e)) all.insert(v);
  };
  for (const auto& a : assumptions) addAll(a);
  addAll(goal);
  for (const auto& p : probes) addAll(p);
  return {all.begin(), all.end()};
}

namespace {

bool simpleSymbol(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) continue;
    if (std::string_view("~!@$%^&*_-+=<>.?/").find(ch) == std::string_view::npos) return false;
  }
  return true;
}

std::string quote(const std::string& s) { return simpleSymbol(s) ? s : "|" + s + "|"; }

std::string sortText(const Sort& s) {
  switch (s.kind()) {
  case SortKind::Bool: return "Bool";
  case SortKind::Int:
  case SortKind::UInt:
  case SortKind::Addr: return "Int";
  case SortKind::Map: break;
  }
  auto keys = s.keys();
  std::string out = sortText(s.value());
  for (auto it = keys.rbegin(); it != keys.rend(); ++it)
    out = "(Array " + sortText(*it) + " " + out + ")";
  return out;
}

/// Sort of the array that remains after applying the first `depth` keys.
std::string partialSort(const Sort& s, std::size_t depth) {
  auto keys = s.keys();
  std::string out = sortText(s.value());
  for (std::size_t i = keys.size(); i-- > depth;) out = "(Array " + sortText(keys[i]) + " " + out + ")";
  return out;
}

class Emitter {
public:
  std::string declare(const Var& v) {
    std::string base = v.key();
    std::string sym = base;
    for (int i = 1; used_.count(sym); ++i) sym = base + "~" + std::to_string(i);
    used_.insert(sym);
    sym = quote(sym);
    scopes_.push_back({v, sym});
    return sym;
  }

  std::string term(const Expr& e) {
    std::ostringstream os;
    write(os, e);
    return os.str();
  }

  void write(std::ostream& os, const Expr& e) {
    switch (e.op()) {
    case Op::Var: os << lookup(e.var()); return;
    case Op::BoolConst: os << (e.boolValue() ? "true" : "false"); return;
    case Op::IntConst:
      if (e.value() < 0) os << "(- " << -e.value() << ')';
      else os << e.value();
      return;
    case Op::Add: nary(os, "+", e); return;
    case Op::Sub: nary(os, "-", e); return;
    case Op::Mul: nary(os, "*", e); return;
    case Op::Div: nary(os, "div", e); return;
    case Op::Select: {
      std::string acc = term(e.kid(0));
      for (std::size_t i = 1; i < e.kids().size(); ++i) acc = "(select " + acc + " " + term(e.kid(i)) + ")";
      os << acc;
      return;
    }
    case Op::Store: {
      std::vector<std::string> keys;
      for (std::size_t i = 1; i + 1 < e.kids().size(); ++i) keys.push_back(term(e.kid(i)));
      os << store(term(e.kid(0)), keys, 0, term(e.kids().back()));
      return;
    }
    case Op::ConstMap: {
      std::size_t depth = e.sort().keys().size();
      std::string acc = term(e.kid(0));
      for (std::size_t d = depth; d-- > 0;) acc = "((as const " + partialSort(e.sort(), d) + ") " + acc + ")";
      os << acc;
      return;
    }
    case Op::Ite: nary(os, "ite", e); return;
    case Op::Eq: nary(os, "=", e); return;
    case Op::Ne: nary(os, "distinct", e); return;
    case Op::Lt: nary(os, "<", e); return;
    case Op::Le: nary(os, "<=", e); return;
    case Op::Gt: nary(os, ">", e); return;
    case Op::Ge: nary(os, ">=", e); return;
    case Op::Not: nary(os, "not", e); return;
    case Op::And: nary(os, "and", e); return;
    case Op::Or: nary(os, "or", e); return;
    case Op::Implies: nary(os, "=>", e); return;
    case Op::Xor: nary(os, "xor", e); return;
    case Op::Forall:
    case Op::Exists: {
      bool all = e.op() == Op::Forall;
      std::size_t mark = scopes_.size();
      std::vector<std::string> guards;
      os << (all ? "(forall (" : "(exists (");
      for (std::size_t i = 0; i < e.bound().size(); ++i) {
        const Var& v = e.bound()[i];
        std::string sym = declare(v);
        os << (i ? " " : "") << '(' << sym << ' ' << sortText(v.sort) << ')';
        if (v.sort.kind() == SortKind::UInt) guards.push_back("(>= " + sym + " 0)");
      }
      os << ") ";
      std::string body = term(e.kid(0));
      if (guards.empty()) {
        os << body;
      } else {
        std::string g = guards.size() == 1 ? guards[0] : "(and";
        if (guards.size() > 1) {
          for (const auto& x : guards) g += " " + x;
          g += ")";
        }
        os << (all ? "(=> " : "(and ") << g << ' ' << body << ')';
      }
      os << ')';
      // Bound symbols stay reserved so that no later binder reuses them.
      scopes_.resize(mark);
      return;
    }
    case Op::Named:
      for (const auto& [body, sym] : defs_)
        if (body == e) {
          os << sym;
          return;
        }
      write(os, e.kid(0));
      return;
    }
  }

  /// Emits a define-fun for every abbreviation over declared symbols, inner
  /// ones first. Later occurrences print as the defined name.
  void define(std::ostream& os, const Expr& e) {
    if (e.op() == Op::Named) {
      for (const auto& d : defs_)
        if (d.first == e) return;
    }
    for (const auto& k : e.kids()) define(os, k);
    if (e.op() != Op::Named) return;
    for (const auto& v : freeVars(e))
      if (!declared(v)) return;
    std::string body = term(e.kid(0));
    std::string sym = e.name();
    for (int i = 1; used_.count(sym); ++i) sym = e.name() + "~" + std::to_string(i);
    used_.insert(sym);
    sym = quote(sym);
    os << "(define-fun " << sym << " () " << sortText(e.sort()) << ' ' << body << ")\n";
    defs_.emplace_back(e, sym);
  }

private:
  bool declared(const Var& v) const {
    for (const auto& s : scopes_)
      if (s.first == v) return true;
    return false;
  }

  const std::string& lookup(const Var& v) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (it->first == v) return it->second;
    throw std::logic_error("smt emit: undeclared variable " + v.key());
  }

  void nary(std::ostream& os, const char* f, const Expr& e) {
    os << '(' << f;
    for (const auto& k : e.kids()) {
      os << ' ';
      write(os, k);
    }
    os << ')';
  }

  std::string store(const std::string& m, const std::vector<std::string>& keys, std::size_t i,
                    const std::string& v) {
    if (i + 1 == keys.size()) return "(store " + m + " " + keys[i] + " " + v + ")";
    std::string inner = "(select " + m + " " + keys[i] + ")";
    return "(store " + m + " " + keys[i] + " " + store(inner, keys, i + 1, v) + ")";
  }

  std::set<std::string> used_;
  std::vector<std::pair<Var, std::string>> scopes_;
  std::vector<std::pair<Expr, std::string>> defs_;
};

std::string uintAxiom(const std::string& sym, const Sort& s) {
  if (s.kind() == SortKind::UInt) return "(>= " + sym + " 0)";
  if (!s.isMap() || s.value().kind() != SortKind::UInt) return {};
  auto keys = s.keys();
  std::string binders, sel = sym;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    std::string k = "k!" + std::to_string(i);
    binders += (i ? " (" : "(") + k + " " + sortText(keys[i]) + ")";
    sel = "(select " + sel + " " + k + ")";
  }
  return "(forall (" + binders + ") (>= " + sel + " 0))";
}

} // namespace

Script emit(const Obligation& o) {
  Script out;
  Emitter em;
  std::ostringstream os;
  os << "; " << o.name << "\n";
  os << "(set-option :produce-models true)\n";
  os << "(set-logic ALL)\n";
  auto decls = o.declarations();
  for (const auto& v : decls) {
    std::string sym = em.declare(v);
    out.symbols.emplace_back(v, sym);
    os << "(declare-fun " << sym << " () " << sortText(v.sort) << ")\n";
  }
  for (const auto& [v, sym] : out.symbols) {
    if (v.sort.isMap() && !o.mapAxioms) continue;
    if (auto ax = uintAxiom(sym, v.sort); !ax.empty()) os << "(assert " << ax << ")\n";
  }
  for (const auto& a : o.assumptions) em.define(os, a);
  em.define(os, o.goal);
  for (const auto& a : o.assumptions) os << "(assert " << em.term(a) << ")\n";
  os << "(assert (not " << em.term(o.goal) << "))\n";
  os << "(check-sat)\n";
  if (!o.probes.empty()) {
    os << "(get-value (";
    for (std::size_t i = 0; i < o.probes.size(); ++i) {
      out.probeTerms.push_back(em.term(o.probes[i]));
      os << (i ? " " : "") << out.probeTerms.back();
    }
    os << "))\n";
  }
  os << "(get-model)\n";
  out.text = os.str();
  return out;
}

std::string emitTerm(const Expr& e) {
  Emitter em;
  for (const auto& v : freeVars(e)) em.declare(v);
  return em.term(e);
}

} // namespace dcv::solver
