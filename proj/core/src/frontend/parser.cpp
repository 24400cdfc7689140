#include "dcv/frontend/parser.hpp"

#include <fstream>
#include <sstream>

#include "lexer.hpp"

namespace dcv::frontend {

namespace {

using detail::Tok;
using detail::Token;

struct SyntaxError {
  Diagnostic diag;
};

bool isAggKeyword(std::string_view s) {
  return s == "sum" || s == "max" || s == "min" || s == "count";
}

AggKind aggFromString(std::string_view s) {
  if (s == "sum") return AggKind::Sum;
  if (s == "max") return AggKind::Max;
  if (s == "min") return AggKind::Min;
  return AggKind::Count;
}

class Parser {
public:
  Parser(std::vector<Token> toks, Diagnostics& diags) : toks_(std::move(toks)), diags_(diags) {}

  Contract run(std::string name) {
    Contract c;
    c.name = std::move(name);
    while (!at(Tok::End)) {
      try {
        statement(c);
      } catch (const SyntaxError& e) {
        diags_.push_back(e.diag);
        recover();
      }
    }
    return c;
  }

private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  bool at(Tok k, std::size_t ahead = 0) const { return peek(ahead).kind == k; }

  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Token& t, std::string msg) {
    throw SyntaxError{{t.loc, Severity::Error, std::move(msg)}};
  }

  const Token& expect(Tok k, std::string_view what = {}) {
    if (!at(k)) {
      std::string msg = "expected ";
      msg += what.empty() ? detail::describe(k) : what;
      msg += ", found ";
      msg += peek().kind == Tok::End ? std::string("end of input") : "'" + peek().text + "'";
      fail(peek(), msg);
    }
    return take();
  }

  // Skip to just past the next statement terminator.
  void recover() {
    while (!at(Tok::End)) {
      if (at(Tok::Dot)) {
        // A dot followed by a directive keyword starts the next statement.
        if (at(Tok::Ident, 1) && isDirective(peek(1).text)) return;
        take();
        return;
      }
      take();
    }
  }

  static bool isDirective(std::string_view s) {
    return s == "decl" || s == "init" || s == "violation" || s == "public";
  }

  void statement(Contract& c) {
    if (at(Tok::Dot)) {
      const Token& dot = take();
      const Token& kw = expect(Tok::Ident, "directive (decl, init, violation, public)");
      if (kw.text == "decl") {
        c.decls.push_back(declaration(dot.loc));
      } else if (kw.text == "init" || kw.text == "violation" || kw.text == "public") {
        Annotation a;
        a.kind = kw.text == "init"        ? AnnotationKind::Init
                 : kw.text == "violation" ? AnnotationKind::Violation
                                          : AnnotationKind::Public;
        a.relation = expect(Tok::Ident, "relation name").text;
        a.loc = dot.loc;
        c.annotations.push_back(std::move(a));
      } else {
        fail(kw, "unknown directive '." + kw.text + "'");
      }
      return;
    }
    c.rules.push_back(rule());
  }

  RelationDecl declaration(SourceLoc loc) {
    RelationDecl d;
    d.loc = loc;
    if (at(Tok::Star)) {
      take();
      d.singleton = true;
    }
    d.name = expect(Tok::Ident, "relation name").text;
    expect(Tok::LParen);
    if (!at(Tok::RParen)) {
      do {
        ColumnDecl col;
        col.name = expect(Tok::Ident, "column name").text;
        expect(Tok::Colon);
        const Token& ty = expect(Tok::Ident, "column type");
        auto parsed = columnTypeFromString(ty.text);
        if (!parsed) fail(ty, "unknown type '" + ty.text + "' (expected address, uint, int or bool)");
        col.type = *parsed;
        d.columns.push_back(std::move(col));
      } while (at(Tok::Comma) && (take(), true));
    }
    expect(Tok::RParen);
    if (at(Tok::LBracket)) {
      const Token& lb = take();
      if (d.singleton) fail(lb, "singleton relation '" + d.name + "' cannot have primary keys");
      do {
        const Token& k = expect(Tok::Int, "column index");
        d.primaryKeys.push_back(static_cast<std::size_t>(k.value));
      } while (at(Tok::Comma) && (take(), true));
      expect(Tok::RBracket);
    }
    return d;
  }

  Arg arg() {
    const Token& t = peek();
    switch (t.kind) {
    case Tok::Underscore: {
      take();
      Arg a = Arg::var("_" + std::to_string(wildcardCounter_++));
      a.wildcard = true;
      return a;
    }
    case Tok::Int: take(); return Arg::integer(t.value);
    case Tok::Minus: {
      take();
      const Token& n = expect(Tok::Int);
      return Arg::integer(-n.value);
    }
    case Tok::Ident:
      take();
      if (t.text == "true") return Arg::boolean(true);
      if (t.text == "false") return Arg::boolean(false);
      return Arg::var(t.text);
    default: fail(t, "expected variable or constant, found '" + t.text + "'");
    }
  }

  RelationalLit relational() {
    RelationalLit lit;
    const Token& name = expect(Tok::Ident, "relation name");
    lit.relation = name.text;
    lit.loc = name.loc;
    expect(Tok::LParen);
    if (!at(Tok::RParen)) {
      do {
        lit.args.push_back(arg());
      } while (at(Tok::Comma) && (take(), true));
    }
    expect(Tok::RParen);
    return lit;
  }

  static std::optional<CmpOp> cmpOp(Tok k) {
    switch (k) {
    case Tok::Gt: return CmpOp::Gt;
    case Tok::Lt: return CmpOp::Lt;
    case Tok::Ge: return CmpOp::Ge;
    case Tok::Le: return CmpOp::Le;
    case Tok::NotEq: return CmpOp::Ne;
    case Tok::EqEq:
    case Tok::Assign: return CmpOp::Eq;
    default: return std::nullopt;
    }
  }

  static std::optional<ArithOp> arithOp(Tok k) {
    switch (k) {
    case Tok::Plus: return ArithOp::Add;
    case Tok::Minus: return ArithOp::Sub;
    case Tok::Star: return ArithOp::Mul;
    case Tok::Slash: return ArithOp::Div;
    default: return std::nullopt;
    }
  }

  BodyLiteral bodyLiteral() {
    SourceLoc loc = peek().loc;
    if (at(Tok::Ident) && at(Tok::LParen, 1)) return relational();

    // Aggregator: out = agg [var]: R(...)
    if (at(Tok::Ident) && at(Tok::Assign, 1) && at(Tok::Ident, 2) && isAggKeyword(peek(2).text) &&
        (at(Tok::Colon, 3) || (at(Tok::Ident, 3) && at(Tok::Colon, 4)))) {
      AggregatorLit agg;
      agg.loc = loc;
      agg.out = take().text;
      take();
      agg.agg = aggFromString(take().text);
      if (at(Tok::Ident)) agg.aggVar = take().text;
      expect(Tok::Colon);
      agg.source = relational();
      return agg;
    }

    Arg lhs = arg();
    auto op = cmpOp(peek().kind);
    if (!op) fail(peek(), "expected comparison or '=' after operand");
    bool assign = at(Tok::Assign);
    take();
    Arg rhs = arg();
    if (auto aop = arithOp(peek().kind)) {
      if (!assign) fail(peek(), "arithmetic is only allowed on the right of '='");
      if (!lhs.isVar() || lhs.wildcard) fail(peek(), "function result must be a variable");
      take();
      FunctionLit fn;
      fn.loc = loc;
      fn.out = lhs.name;
      fn.op = *aop;
      fn.lhs = std::move(rhs);
      fn.rhs = arg();
      return fn;
    }
    ConditionLit cond;
    cond.loc = loc;
    cond.lhs = std::move(lhs);
    cond.op = *op;
    cond.rhs = std::move(rhs);
    return cond;
  }

  Rule rule() {
    wildcardCounter_ = 0;
    Rule r;
    r.loc = peek().loc;
    r.head = relational();
    expect(Tok::Turnstile, "':-'");
    do {
      r.body.push_back(bodyLiteral());
    } while (at(Tok::Comma) && (take(), true));
    expect(Tok::Dot, "'.' at end of rule");
    return r;
  }

  std::vector<Token> toks_;
  Diagnostics& diags_;
  std::size_t pos_ = 0;
  int wildcardCounter_ = 0;
};

void printArg(std::ostream& os, const Arg& a) {
  switch (a.kind) {
  case Arg::Kind::Var: os << (a.wildcard ? "_" : a.name); break;
  case Arg::Kind::Int: os << a.value; break;
  case Arg::Kind::Bool: os << (a.value ? "true" : "false"); break;
  }
}

void printRelational(std::ostream& os, const RelationalLit& lit) {
  os << lit.relation << '(';
  for (std::size_t i = 0; i < lit.args.size(); ++i) {
    if (i) os << ", ";
    printArg(os, lit.args[i]);
  }
  os << ')';
}

struct LiteralPrinter {
  std::ostream& os;
  void operator()(const RelationalLit& l) const { printRelational(os, l); }
  void operator()(const ConditionLit& l) const {
    printArg(os, l.lhs);
    os << ' ' << toString(l.op) << ' ';
    printArg(os, l.rhs);
  }
  void operator()(const FunctionLit& l) const {
    os << l.out << " = ";
    printArg(os, l.lhs);
    os << ' ' << toString(l.op) << ' ';
    printArg(os, l.rhs);
  }
  void operator()(const AggregatorLit& l) const {
    os << l.out << " = " << toString(l.agg);
    if (l.aggVar) os << ' ' << *l.aggVar;
    os << ": ";
    printRelational(os, l.source);
  }
};

} // namespace

Checked<Contract> parse(std::string_view source, std::string contractName) {
  Checked<Contract> out;
  auto toks = detail::lex(source, out.diagnostics);
  Parser p(std::move(toks), out.diagnostics);
  Contract c = p.run(std::move(contractName));
  if (!hasErrors(out.diagnostics)) out.value = std::move(c);
  return out;
}

Checked<Contract> parseFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    Checked<Contract> out;
    out.diagnostics.push_back({{0, 0}, Severity::Error, "cannot read file '" + path.string() + "'"});
    return out;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.stem().string());
}

std::string print(const Contract& c) {
  std::ostringstream os;
  for (const auto& d : c.decls) {
    os << ".decl " << (d.singleton ? "*" : "") << d.name << '(';
    for (std::size_t i = 0; i < d.columns.size(); ++i) {
      if (i) os << ", ";
      os << d.columns[i].name << ": " << toString(d.columns[i].type);
    }
    os << ')';
    if (!d.primaryKeys.empty()) {
      os << '[';
      for (std::size_t i = 0; i < d.primaryKeys.size(); ++i) {
        if (i) os << ',';
        os << d.primaryKeys[i];
      }
      os << ']';
    }
    os << '\n';
  }
  if (!c.annotations.empty()) os << '\n';
  for (const auto& a : c.annotations) os << '.' << toString(a.kind) << ' ' << a.relation << '\n';
  if (!c.rules.empty()) os << '\n';
  for (const auto& r : c.rules) {
    printRelational(os, r.head);
    os << " :- ";
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      if (i) os << ", ";
      std::visit(LiteralPrinter{os}, r.body[i]);
    }
    os << ".\n";
  }
  return os.str();
}

} // namespace dcv::frontend
