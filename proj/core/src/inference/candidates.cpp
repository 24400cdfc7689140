#include "dcv/inference/candidates.hpp"

#include <algorithm>
#include <set>

namespace dcv::inference {

using namespace logic;

Expr initAbbreviation(const Expr& initDefaults) { return mkNamed(kInitName, initDefaults); }

namespace {

std::vector<Var> unionLocals(const Predicate& a, const Predicate* b) {
  std::vector<Var> out = a.locals;
  if (b)
    for (const auto& v : b->locals)
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

} // namespace

std::vector<Candidate> generateCandidates(const std::vector<Predicate>& P, const Expr& initDefaults,
                                          const CandidateOptions& opts) {
  Expr init = initAbbreviation(initDefaults);
  std::vector<Candidate> out;
  std::set<std::string> seen;
  auto emit = [&](int pattern, const SignedPredicate& p, const SignedPredicate* q) {
    std::vector<Expr> premise{mkNot(init)};
    if (q) premise.push_back(q->formula());
    Expr body = mkImplies(mkAnd(premise), mkNot(p.formula()));
    Expr closed = mkForall(unionLocals(p.pred, q ? &q->pred : nullptr), body);
    if (closed.isTrue()) return;
    std::string key = toString(closed);
    if (!seen.insert(key).second) return;
    Candidate c;
    c.pattern = pattern;
    c.p = p;
    if (q) c.q = *q;
    c.closedForm = closed;
    out.push_back(std::move(c));
  };
  std::vector<bool> signs{true};
  if (opts.polarity) signs.push_back(false);
  if (opts.pattern1)
    for (const auto& p : P)
      for (bool s : signs) emit(1, {p, s}, nullptr);
  if (opts.pattern2)
    for (std::size_t i = 0; i < P.size(); ++i)
      for (std::size_t j = 0; j < P.size(); ++j) {
        if (i == j) continue;
        for (bool sq : signs)
          for (bool sp : signs) {
            SignedPredicate q{P[i], sq};
            emit(2, {P[j], sp}, &q);
          }
      }
  return out;
}

Candidate plainCandidate(const Expr& formula) {
  Candidate c;
  c.pattern = 0;
  c.closedForm = formula;
  c.initGuarded = false;
  return c;
}

} // namespace dcv::inference
