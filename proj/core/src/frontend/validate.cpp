#include "dcv/frontend/validate.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace dcv::frontend {

namespace {

enum class TypeClass { Bool, Address, Numeric };

TypeClass classOf(ColumnType t) {
  switch (t) {
  case ColumnType::Bool: return TypeClass::Bool;
  case ColumnType::Address: return TypeClass::Address;
  default: return TypeClass::Numeric;
  }
}

std::string_view className(TypeClass c) {
  switch (c) {
  case TypeClass::Bool: return "bool";
  case TypeClass::Address: return "address";
  case TypeClass::Numeric: return "numeric";
  }
  return "?";
}

std::string ruleLabel(const Rule& r) {
  return "rule for '" + r.head.relation + "' (line " + std::to_string(r.loc.line) + ")";
}

class Validator {
public:
  explicit Validator(Contract& c) : c_(c) {}

  Diagnostics run(std::vector<std::map<std::string, ColumnType>>& varTypes) {
    checkDecls();
    checkAnnotations();
    varTypes.resize(c_.rules.size());
    for (std::size_t i = 0; i < c_.rules.size(); ++i) checkRule(c_.rules[i], varTypes[i]);
    checkProgram();
    if (diags_.empty()) checkCycles();
    return std::move(diags_);
  }

private:
  void error(SourceLoc loc, std::string msg) {
    diags_.push_back({loc, Severity::Error, std::move(msg)});
  }

  const RelationDecl* lookup(std::string_view name) const {
    if (auto* d = c_.findDecl(name)) return d;
    return findBuiltin(name);
  }

  void checkDecls() {
    std::set<std::string, std::less<>> seen;
    for (const auto& d : c_.decls) {
      if (!seen.insert(d.name).second) error(d.loc, "duplicate declaration of relation '" + d.name + "'");
      if (findBuiltin(d.name)) error(d.loc, "'" + d.name + "' is a builtin relation and cannot be redeclared");
      if (d.name == "check") error(d.loc, "'check' is reserved");
      if (d.isHandler() && d.singleton)
        error(d.loc, "transaction handler '" + d.name + "' cannot be a singleton");
      if (d.isHandler() && !d.primaryKeys.empty())
        error(d.loc, "transaction handler '" + d.name + "' cannot have primary keys");
      if (!d.isHandler() && d.columns.empty())
        error(d.loc, "relation '" + d.name + "' must have at least one column");
      std::set<std::string> cols;
      for (const auto& col : d.columns)
        if (!cols.insert(col.name).second)
          error(d.loc, "duplicate column '" + col.name + "' in relation '" + d.name + "'");
      for (std::size_t i = 0; i < d.primaryKeys.size(); ++i) {
        if (d.primaryKeys[i] >= d.columns.size())
          error(d.loc, "primary key index " + std::to_string(d.primaryKeys[i]) +
                           " out of range for relation '" + d.name + "'");
        if (i > 0 && d.primaryKeys[i] <= d.primaryKeys[i - 1])
          error(d.loc, "primary key indices of '" + d.name + "' must be strictly increasing");
      }
    }
  }

  void checkAnnotations() {
    for (const auto& a : c_.annotations) {
      const RelationDecl* d = c_.findDecl(a.relation);
      if (!d) {
        error(a.loc, "annotation ." + std::string(toString(a.kind)) + " names undeclared relation '" +
                         a.relation + "'");
        continue;
      }
      if (d->isHandler())
        error(a.loc, "transaction handler '" + a.relation + "' cannot be annotated");
      if (a.kind == AnnotationKind::Init && c_.hasAnnotation(a.relation, AnnotationKind::Violation))
        error(a.loc, "relation '" + a.relation + "' cannot be both init and violation");
      if (a.kind == AnnotationKind::Violation) {
        bool defined = std::any_of(c_.rules.begin(), c_.rules.end(),
                                   [&](const Rule& r) { return r.head.relation == a.relation; });
        if (!defined) error(a.loc, "violation relation '" + a.relation + "' has no defining rule");
      }
    }
  }

  // Records var types; reports conflicts.
  struct Typing {
    Validator& v;
    const Rule& rule;
    std::map<std::string, ColumnType>& types;

    void bindVar(const std::string& name, ColumnType t, SourceLoc loc) {
      auto [it, inserted] = types.emplace(name, t);
      if (!inserted && classOf(it->second) != classOf(t))
        v.error(loc, "variable '" + name + "' used as " + std::string(toString(it->second)) +
                         " and as " + std::string(toString(t)) + " in " + ruleLabel(rule));
    }

    void checkArg(const Arg& a, ColumnType t, SourceLoc loc, const std::string& rel) {
      switch (a.kind) {
      case Arg::Kind::Var: bindVar(a.name, t, loc); break;
      case Arg::Kind::Bool:
        if (t != ColumnType::Bool)
          v.error(loc, "boolean constant in " + std::string(toString(t)) + " column of '" + rel + "'");
        break;
      case Arg::Kind::Int:
        if (t == ColumnType::Bool)
          v.error(loc, "integer constant in bool column of '" + rel + "'");
        else if (t != ColumnType::Int && a.value < 0)
          v.error(loc, "negative constant in " + std::string(toString(t)) + " column of '" + rel + "'");
        break;
      }
    }

    void relational(const RelationalLit& lit, bool isHead) {
      const RelationDecl* d = v.lookup(lit.relation);
      if (!d) {
        v.error(lit.loc, "undeclared relation '" + lit.relation + "'");
        return;
      }
      if (lit.args.size() != d->arity()) {
        v.error(lit.loc, "relation '" + lit.relation + "' expects " + std::to_string(d->arity()) +
                             " arguments, got " + std::to_string(lit.args.size()));
        return;
      }
      if (isHead && (d->isHandler() || findBuiltin(lit.relation)))
        v.error(lit.loc, "'" + lit.relation + "' cannot appear in a rule head");
      for (std::size_t i = 0; i < lit.args.size(); ++i)
        checkArg(lit.args[i], d->columns[i].type, lit.loc, lit.relation);
    }

    std::optional<TypeClass> operandClass(const Arg& a) const {
      switch (a.kind) {
      case Arg::Kind::Bool: return TypeClass::Bool;
      case Arg::Kind::Int: return std::nullopt; // integers also compare with addresses
      case Arg::Kind::Var: {
        auto it = types.find(a.name);
        if (it == types.end()) return std::nullopt;
        return classOf(it->second);
      }
      }
      return std::nullopt;
    }
  };

  void checkRule(Rule& r, std::map<std::string, ColumnType>& types) {
    Typing ty{*this, r, types};
    std::size_t before = diags_.size();

    std::set<std::string> bound;
    std::size_t handlers = 0, relationals = 0, aggregators = 0;
    bool usesBuiltin = false;

    for (const auto& lit : r.body) {
      if (auto* rel = std::get_if<RelationalLit>(&lit)) {
        ++relationals;
        if (isHandlerName(rel->relation)) ++handlers;
        if (findBuiltin(rel->relation)) usesBuiltin = true;
        ty.relational(*rel, false);
        for (const auto& a : rel->args)
          if (a.isVar()) bound.insert(a.name);
      } else if (auto* agg = std::get_if<AggregatorLit>(&lit)) {
        ++aggregators;
        ty.relational(agg->source, false);
        if (agg->agg == AggKind::Count && agg->aggVar)
          error(agg->loc, "count aggregator takes no aggregated variable");
        if (agg->agg != AggKind::Count && !agg->aggVar)
          error(agg->loc, std::string(toString(agg->agg)) + " aggregator needs an aggregated variable");
        if (agg->aggVar) {
          bool inSource = std::any_of(agg->source.args.begin(), agg->source.args.end(),
                                      [&](const Arg& a) { return a.isVar() && a.name == *agg->aggVar; });
          if (!inSource)
            error(agg->loc, "aggregated variable '" + *agg->aggVar + "' does not occur in '" +
                                agg->source.relation + "'");
        }
      }
    }
    // Outputs of aggregators and functions; resolved after relational typing.
    for (const auto& lit : r.body) {
      if (auto* agg = std::get_if<AggregatorLit>(&lit)) {
        ColumnType t = ColumnType::UInt;
        if (agg->aggVar) {
          auto it = types.find(*agg->aggVar);
          if (it != types.end()) t = it->second;
          if (it != types.end() && classOf(t) != TypeClass::Numeric)
            error(agg->loc, "cannot aggregate non-numeric variable '" + *agg->aggVar + "'");
        }
        ty.bindVar(agg->out, t, agg->loc);
        bound.insert(agg->out);
      }
    }
    // Functions may chain; iterate until no new variable is bound.
    bool progress = true;
    std::set<const FunctionLit*> done;
    while (progress) {
      progress = false;
      for (const auto& lit : r.body) {
        auto* fn = std::get_if<FunctionLit>(&lit);
        if (!fn || done.count(fn)) continue;
        auto isBound = [&](const Arg& a) { return !a.isVar() || bound.count(a.name); };
        if (!isBound(fn->lhs) || !isBound(fn->rhs)) continue;
        done.insert(fn);
        progress = true;
        ColumnType out = ColumnType::UInt;
        for (const Arg* a : {&fn->lhs, &fn->rhs}) {
          if (a->kind == Arg::Kind::Bool) {
            error(fn->loc, "function operands must be numeric");
          } else if (a->isVar()) {
            ColumnType t = types.at(a->name);
            if (classOf(t) != TypeClass::Numeric)
              error(fn->loc, "function operand '" + a->name + "' must be numeric, not " +
                                 std::string(toString(t)));
            if (t == ColumnType::Int) out = ColumnType::Int;
          } else if (a->value < 0) {
            out = ColumnType::Int;
          }
        }
        if (fn->op == ArithOp::Sub && out == ColumnType::UInt && types.count(fn->out) == 0)
          out = ColumnType::Int;
        ty.bindVar(fn->out, out, fn->loc);
        bound.insert(fn->out);
      }
    }
    for (const auto& lit : r.body) {
      auto* fn = std::get_if<FunctionLit>(&lit);
      if (fn && !done.count(fn))
        error(fn->loc, "function '" + fn->out + " = ...' uses an unbound variable in " + ruleLabel(r));
    }
    for (const auto& lit : r.body) {
      auto* cond = std::get_if<ConditionLit>(&lit);
      if (!cond) continue;
      for (const Arg* a : {&cond->lhs, &cond->rhs})
        if (a->isVar() && !bound.count(a->name))
          error(cond->loc, "unbound variable '" + a->name + "' in condition of " + ruleLabel(r));
      auto lc = ty.operandClass(cond->lhs), rc = ty.operandClass(cond->rhs);
      if (lc && rc && *lc != *rc)
        error(cond->loc, "condition compares " + std::string(className(*lc)) + " with " +
                             std::string(className(*rc)));
      bool ordered = cond->op != CmpOp::Eq && cond->op != CmpOp::Ne;
      if (ordered && ((lc && *lc != TypeClass::Numeric) || (rc && *rc != TypeClass::Numeric)))
        error(cond->loc, "ordering comparison requires numeric operands");
      if (!lc && !rc && (cond->lhs.isVar() || cond->rhs.isVar())) {
        // both unbound: already reported
      }
    }

    // Head.
    ty.relational(r.head, true);
    for (const auto& a : r.head.args)
      if (a.isVar() && !bound.count(a.name))
        error(r.head.loc, "unbound head variable '" + (a.wildcard ? std::string("_") : a.name) +
                              "' in " + ruleLabel(r));

    if (diags_.size() != before) return;

    // Classification.
    bool isViolation = c_.hasAnnotation(r.head.relation, AnnotationKind::Violation);
    if (handlers > 1) {
      error(r.loc, ruleLabel(r) + " has more than one transaction handler literal");
    } else if (handlers == 1) {
      r.kind = RuleKind::Transaction;
      if (aggregators) error(r.loc, "transaction " + ruleLabel(r) + " cannot aggregate");
      if (isViolation) error(r.loc, "violation query cannot contain a transaction handler");
    } else if (isViolation) {
      r.kind = RuleKind::ViolationQuery;
      if (aggregators) error(r.loc, "violation query cannot aggregate");
    } else if (aggregators) {
      r.kind = RuleKind::Aggregation;
      const AggregatorLit* agg = nullptr;
      const RelationalLit* rel = nullptr;
      for (const auto& lit : r.body) {
        if (auto* a = std::get_if<AggregatorLit>(&lit)) agg = a;
        if (auto* l = std::get_if<RelationalLit>(&lit)) rel = l;
      }
      if (aggregators != 1 || relationals != 1 || r.body.size() != 2 || agg->source.relation != rel->relation)
        error(r.loc, "aggregation " + ruleLabel(r) +
                         " must contain exactly one relational literal and one aggregator over the same relation");
    } else {
      r.kind = RuleKind::Join;
    }
    if (usesBuiltin && r.kind != RuleKind::Transaction)
      error(r.loc, "msgSender/msgValue may only be used in transaction rules (" + ruleLabel(r) + ")");
  }

  void checkProgram() {
    bool anyTx = std::any_of(c_.rules.begin(), c_.rules.end(),
                             [](const Rule& r) { return r.kind == RuleKind::Transaction; });
    bool anyViolation = std::any_of(c_.annotations.begin(), c_.annotations.end(),
                                    [](const Annotation& a) { return a.kind == AnnotationKind::Violation; });
    if (!diags_.empty()) return;
    if (!anyTx) error({1, 1}, "contract has no transaction rule (a rule with a 'recv_' literal)");
    if (!anyViolation) error({1, 1}, "contract has no .violation annotation");
  }

  void checkCycles() {
    std::map<std::string, std::set<std::string>> edges;
    std::map<std::string, SourceLoc> where;
    for (const auto& r : c_.rules) {
      // Transaction rules fire only on incoming messages, never on insertion.
      if (r.triggerIndex()) continue;
      auto& out = edges[r.head.relation];
      where.emplace(r.head.relation, r.loc);
      for (const auto& lit : r.body) {
        if (auto* l = std::get_if<RelationalLit>(&lit)) out.insert(l->relation);
        if (auto* a = std::get_if<AggregatorLit>(&lit)) out.insert(a->source.relation);
      }
    }
    enum class Mark { None, Active, Done };
    std::map<std::string, Mark> mark;
    std::vector<std::string> stack;
    std::set<std::set<std::string>> reported;
    std::function<void(const std::string&)> dfs = [&](const std::string& n) {
      mark[n] = Mark::Active;
      stack.push_back(n);
      for (const auto& m : edges[n]) {
        if (mark[m] == Mark::Active) {
          auto it = std::find(stack.begin(), stack.end(), m);
          std::vector<std::string> cycle(it, stack.end());
          std::set<std::string> key(cycle.begin(), cycle.end());
          if (reported.insert(key).second) {
            std::string msg = "dependency cycle: ";
            for (const auto& rel : cycle) msg += rel + " -> ";
            msg += cycle.front();
            error(where[m], msg);
          }
        } else if (mark[m] == Mark::None) {
          dfs(m);
        }
      }
      stack.pop_back();
      mark[n] = Mark::Done;
    };
    for (const auto& [n, _] : edges)
      if (mark[n] == Mark::None) dfs(n);
  }

  Contract& c_;
  Diagnostics diags_;
};

} // namespace

const RelationDecl& ValidatedContract::relation(std::string_view name) const {
  auto it = declIndex_.find(name);
  if (it != declIndex_.end()) return contract_.decls[it->second];
  if (auto* b = findBuiltin(name)) return *b;
  throw std::out_of_range("unknown relation '" + std::string(name) + "'");
}

bool ValidatedContract::isDeclared(std::string_view name) const {
  return declIndex_.count(name) != 0;
}

std::vector<const RelationDecl*> ValidatedContract::stateRelations() const {
  std::vector<const RelationDecl*> out;
  for (const auto& d : contract_.decls)
    if (!d.isHandler()) out.push_back(&d);
  return out;
}

std::vector<std::size_t> ValidatedContract::transactionRules() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < contract_.rules.size(); ++i)
    if (contract_.rules[i].kind == RuleKind::Transaction) out.push_back(i);
  return out;
}

std::vector<std::size_t> ValidatedContract::violationRules() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < contract_.rules.size(); ++i)
    if (contract_.rules[i].kind == RuleKind::ViolationQuery) out.push_back(i);
  return out;
}

std::vector<std::size_t> ValidatedContract::rulesReading(std::string_view relation) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < contract_.rules.size(); ++i) {
    const Rule& r = contract_.rules[i];
    if (r.kind == RuleKind::ViolationQuery || r.kind == RuleKind::Transaction) continue;
    bool reads = std::any_of(r.body.begin(), r.body.end(), [&](const BodyLiteral& lit) {
      if (auto* l = std::get_if<RelationalLit>(&lit)) return l->relation == relation;
      if (auto* a = std::get_if<AggregatorLit>(&lit)) return a->source.relation == relation;
      return false;
    });
    if (reads) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> ValidatedContract::dependentRules(std::size_t r) const {
  return rulesReading(contract_.rules.at(r).head.relation);
}

ColumnType ValidatedContract::varType(std::size_t r, const std::string& var) const {
  return varTypes_.at(r).at(var);
}

Checked<ValidatedContract> validate(Contract c) {
  Checked<ValidatedContract> out;
  ValidatedContract vc;
  Validator v(c);
  out.diagnostics = v.run(vc.varTypes_);
  if (hasErrors(out.diagnostics)) return out;
  vc.contract_ = std::move(c);
  for (std::size_t i = 0; i < vc.contract_.decls.size(); ++i)
    vc.declIndex_.emplace(vc.contract_.decls[i].name, i);
  for (const auto& r : vc.contract_.rules) vc.written_.insert(r.head.relation);
  out.value = std::move(vc);
  return out;
}

} // namespace dcv::frontend
