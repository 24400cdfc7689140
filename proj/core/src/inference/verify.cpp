#include "dcv/inference/verify.hpp"

#include <algorithm>
#include <set>

#include "dcv/logic/eval.hpp"

namespace dcv::inference {

using namespace logic;
using solver::Obligation;
using solver::SolverResult;

SolverSession::SolverSession(const VerifierConfig& cfg, Stats& stats)
    : cfg_(cfg), stats_(stats), deadline_(std::chrono::steady_clock::now() + cfg.budget) {}

SolverResult SolverSession::run(const Obligation& o) {
  auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline_ - std::chrono::steady_clock::now());
  if (left.count() <= 0) throw BudgetExhausted();
  solver::SolverConfig sc = cfg_.solver;
  if (sc.timeout > left) sc.timeout = left;
  ++stats_.queries;
  SolverResult r = solver::check(o, sc);
  if (r.isError()) throw SolverFailure(std::string(solver::toString(r.kind)) + ": " + r.detail);
  if (r.kind == SolverResult::Kind::Unknown && r.detail == "timeout" &&
      std::chrono::steady_clock::now() >= deadline_)
    throw BudgetExhausted();
  return r;
}

namespace {

std::vector<Expr> premise(const std::vector<Candidate>& C, const std::vector<std::size_t>& live,
                          const Expr& prop, const Expr& tr) {
  std::vector<Expr> out;
  for (std::size_t i : live) out.push_back(C[i].closedForm);
  out.push_back(prop);
  out.push_back(tr);
  return out;
}

// Carrier for evaluating quantified candidates in a model: every value the
// model mentions at each sort, plus 0 and one value above all of them.
FiniteDomain modelDomain(const Env& env, const TransitionSystem& ts) {
  std::map<SortKind, std::set<std::int64_t>> seen;
  auto addScalar = [&](const Sort& s, const Value& v) {
    if (!s.isBool() && v.isInt()) seen[s.kind()].insert(v.asInt());
  };
  for (const auto& sv : ts.stateVars)
    for (bool primed : {false, true}) {
      Var v = sv.var(primed);
      auto it = env.find(v.key());
      if (it == env.end()) continue;
      if (!it->second.isMap()) {
        addScalar(v.sort, it->second);
        continue;
      }
      const MapData& m = it->second.asMap();
      auto keys = v.sort.keys();
      addScalar(v.sort.value(), m.dflt);
      for (const auto& [k, val] : m.entries) {
        for (std::size_t i = 0; i < k.size() && i < keys.size(); ++i)
          if (!keys[i].isBool()) seen[keys[i].kind()].insert(k[i]);
        addScalar(v.sort.value(), val);
      }
    }
  FiniteDomain dom;
  for (SortKind k : {SortKind::UInt, SortKind::Addr, SortKind::Int}) {
    auto& vals = seen[k];
    vals.insert(0);
    vals.insert(*vals.rbegin() + 1);
    dom.values[k] = {vals.begin(), vals.end()};
  }
  return dom;
}

// Targets whose (primed) closed form evaluates to false in the model.
std::vector<std::size_t> falseInModel(const std::vector<Candidate>& C, const std::vector<std::size_t>& targets,
                                      const solver::Model& model, const TransitionSystem& ts, bool primed) {
  std::vector<std::size_t> out;
  Env env = model.env();
  FiniteDomain dom = modelDomain(env, ts);
  for (std::size_t i : targets) {
    try {
      auto v = evaluatePartial(primed ? prime(C[i].closedForm) : C[i].closedForm, env, dom);
      if (v && v->isBool() && !v->asBool()) out.push_back(i);
    } catch (const EvalError&) {
    }
  }
  return out;
}

Var probeVar(std::size_t i) { return Var{"cand!" + std::to_string(i), Sort::boolean(), VarRole::Param, false}; }

// One query for a batch: can one of `targets` be falsified? Probes are only
// bounded from below (f ⟹ b): a probe that is false in the model proves its
// candidate false there, and the solver cannot substitute the probe away.
// Returns the targets with a false probe together with every `watched`
// candidate that evaluates to false in the model, or nullopt when the
// solver gave no usable answer.
std::optional<std::vector<std::size_t>> batchRefute(const std::vector<Candidate>& C,
                                                     const std::vector<std::size_t>& targets,
                                                     const std::vector<std::size_t>& watched,
                                                     std::vector<Expr> assumptions, bool primed,
                                                     const std::string& name, SolverSession& session,
                                                     const TransitionSystem& ts, bool& allValid) {
  Obligation o;
  o.name = name;
  std::vector<Expr> goals;
  for (std::size_t i : targets) {
    Expr b = mkVar(probeVar(i));
    assumptions.push_back(mkImplies(primed ? prime(C[i].closedForm) : C[i].closedForm, b));
    goals.push_back(b);
    o.probes.push_back(b);
  }
  o.assumptions = std::move(assumptions);
  o.goal = mkAnd(goals);
  SolverResult r = session.run(o);
  allValid = r.isValid();
  if (allValid) return std::vector<std::size_t>{};
  if (r.kind != SolverResult::Kind::Invalid) return std::nullopt;
  std::vector<std::size_t> falsified = falseInModel(C, watched, r.model, ts, primed);
  for (std::size_t k = 0; k < targets.size(); ++k)
    if (k < r.probes.size() && r.probes[k] && !*r.probes[k] &&
        std::find(falsified.begin(), falsified.end(), targets[k]) == falsified.end())
      falsified.push_back(targets[k]);
  if (falsified.empty()) return std::nullopt;
  std::sort(falsified.begin(), falsified.end());
  return falsified;
}

} // namespace

bool refuteInvariant(const Candidate& inv, const std::vector<Candidate>& C, const TransitionSystem& ts,
                     const Expr& prop, SolverSession& session) {
  if (!inv.initGuarded) {
    SolverResult base = session.run({session.name("refute.base"), {ts.init}, inv.closedForm, {}});
    if (!base.isValid()) return true;
  }
  std::vector<std::size_t> all(C.size());
  for (std::size_t i = 0; i < C.size(); ++i) all[i] = i;
  SolverResult step = session.run({session.name("refute.step"), premise(C, all, prop, ts.tr()), prime(inv.closedForm), {}});
  return !step.isValid();
}

HoudiniResult findInductiveInvariant(const std::vector<Candidate>& C, const TransitionSystem& ts,
                                     const Expr& prop, SolverSession& session) {
  HoudiniResult out;
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < C.size(); ++i) live.push_back(i);
  auto remove = [&](const std::vector<std::size_t>& gone, const char* why) {
    for (std::size_t i : gone) {
      out.refuted.push_back(i);
      out.trace.push_back(std::string("refuted (") + why + "): " + C[i].text());
    }
    live.erase(std::remove_if(live.begin(), live.end(),
                              [&](std::size_t i) { return std::find(gone.begin(), gone.end(), i) != gone.end(); }),
               live.end());
  };

  // Base case for candidates not guarded by ¬init.
  std::vector<std::size_t> unguarded;
  for (std::size_t i : live)
    if (!C[i].initGuarded) unguarded.push_back(i);
  while (!unguarded.empty()) {
    bool allValid = false;
    auto gone = session.config().batched
                    ? batchRefute(C, unguarded, unguarded, {ts.init}, false, session.name("houdini.base"), session, ts, allValid)
                    : std::nullopt;
    if (allValid) break;
    if (!gone) {
      gone.emplace();
      for (std::size_t i : unguarded) {
        SolverResult r = session.run({session.name("houdini.base.c" + std::to_string(i)), {ts.init}, C[i].closedForm, {}});
        if (!r.isValid()) gone->push_back(i);
      }
      remove(*gone, "base");
      break;
    }
    remove(*gone, "base");
    unguarded.erase(std::remove_if(unguarded.begin(), unguarded.end(),
                                   [&](std::size_t i) { return std::find(gone->begin(), gone->end(), i) != gone->end(); }),
                    unguarded.end());
  }

  Expr tr = ts.tr();
  const std::size_t chunk = session.config().batched ? session.config().batchSize : 1;
  while (!live.empty()) {
    ++out.rounds;
    std::string round = "houdini.r" + std::to_string(out.rounds);
    std::size_t before = live.size();
    auto prem = premise(C, live, prop, tr);
    // Candidates not yet shown preserved in this round. Every query of the
    // round uses the premise the round started with, so a model refutes
    // any pending candidate that is false in its post-state.
    std::vector<std::size_t> pending = live, gone;
    std::size_t queries = 0;
    while (!pending.empty()) {
      std::size_t n = chunk ? std::min(chunk, pending.size()) : pending.size();
      std::vector<std::size_t> targets(pending.begin(), pending.begin() + n);
      ++queries;
      bool allValid = false;
      std::optional<std::vector<std::size_t>> g;
      if (n > 1) {
        g = batchRefute(C, targets, pending, prem, true, session.name(round + ".q" + std::to_string(queries)), session,
                        ts, allValid);
      } else {
        SolverResult r = session.run({session.name(round + ".c" + std::to_string(targets[0])), prem,
                                      prime(C[targets[0]].closedForm), {}});
        allValid = r.isValid();
        // Unknown refutes.
        if (!allValid) g = std::vector<std::size_t>{targets[0]};
      }
      if (allValid) {
        pending.erase(pending.begin(), pending.begin() + n);
      } else if (g) {
        gone.insert(gone.end(), g->begin(), g->end());
        pending.erase(std::remove_if(pending.begin(), pending.end(),
                                     [&](std::size_t i) { return std::find(g->begin(), g->end(), i) != g->end(); }),
                      pending.end());
      } else {
        // No usable model: one query per target.
        for (std::size_t i : targets) {
          ++queries;
          SolverResult r = session.run({session.name(round + ".c" + std::to_string(i)), prem, prime(C[i].closedForm), {}});
          if (!r.isValid()) gone.push_back(i);
        }
        pending.erase(pending.begin(), pending.begin() + n);
      }
    }
    std::sort(gone.begin(), gone.end());
    remove(gone, "step");
    out.trace.push_back("round " + std::to_string(out.rounds) + ": " + std::to_string(before) + " candidates, " +
                        std::to_string(gone.size()) + " refuted, " + std::to_string(queries) + " queries");
    if (gone.empty()) break;
  }
  out.survivors = live;
  for (std::size_t i : live) out.trace.push_back("survivor: " + C[i].text());
  return out;
}

std::string_view toString(Verdict::Kind k) {
  switch (k) {
  case Verdict::Kind::Verified: return "verified";
  case Verdict::Kind::Unknown: return "unknown";
  case Verdict::Kind::InputError: return "input-error";
  }
  return "?";
}

std::string_view toString(Verdict::Reason r) {
  switch (r) {
  case Verdict::Reason::None: return "none";
  case Verdict::Reason::FailedBase: return "failed-base";
  case Verdict::Reason::NoInductiveStrengthening: return "no-inductive-strengthening";
  case Verdict::Reason::SolverUnknown: return "solver-unknown";
  case Verdict::Reason::Timeout: return "timeout";
  }
  return "?";
}

std::vector<Obligation> plainObligations(const TransitionSystem& ts, const Property& prop, const std::string& prefix) {
  return {
      Obligation{prefix + ".base", {ts.init}, prop.formula, {}},
      Obligation{prefix + ".induction", {prop.formula, ts.tr()}, prime(prop.formula), {}},
  };
}

Verdict verifyProperty(const TransitionSystem& ts, const Property& prop,
                       const std::function<std::vector<Candidate>()>& candidates, const VerifierConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  Verdict v;
  v.property = prop.name;
  SolverSession session(cfg, v.stats);
  auto finish = [&](Verdict::Kind k, Verdict::Reason r) {
    v.kind = k;
    v.reason = r;
    v.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return v;
  };
  auto unknownFrom = [&](const SolverResult& r, Verdict::Reason onInvalid) {
    if (r.kind == SolverResult::Kind::Invalid) {
      if (!r.model.empty()) v.model = r.model;
      return finish(Verdict::Kind::Unknown, onInvalid);
    }
    v.detail = "solver answered unknown (" + r.detail + ")";
    return finish(Verdict::Kind::Unknown, Verdict::Reason::SolverUnknown);
  };

  try {
    auto plain = plainObligations(ts, prop, session.name(prop.name));
    SolverResult base = session.run(plain[0]);
    v.trace.push_back("base: " + std::string(solver::toString(base.kind)));
    if (!base.isValid()) return unknownFrom(base, Verdict::Reason::FailedBase);

    SolverResult step = session.run(plain[1]);
    v.trace.push_back("plain induction: " + std::string(solver::toString(step.kind)));
    if (step.isValid()) {
      v.plainInduction = true;
      v.invariant = prop.formula;
      return finish(Verdict::Kind::Verified, Verdict::Reason::None);
    }

    std::vector<Candidate> C = candidates();
    v.stats.candidates = C.size();
    v.trace.push_back("candidates: " + std::to_string(C.size()));
    HoudiniResult h = findInductiveInvariant(C, ts, prop.formula, session);
    v.stats.rounds = h.rounds;
    v.stats.survivors = h.survivors.size();
    v.trace.insert(v.trace.end(), h.trace.begin(), h.trace.end());
    std::vector<Expr> inv;
    for (std::size_t i : h.survivors) {
      inv.push_back(C[i].closedForm);
      v.survivors.push_back(C[i].text());
    }
    for (std::size_t i : h.refuted) v.refuted.push_back(C[i].text());

    // Induction with the inferred invariant.
    Expr strengthened = mkAnd(mkAnd(inv), prop.formula);
    std::vector<Expr> stepPremise = inv;
    stepPremise.push_back(prop.formula);
    stepPremise.push_back(ts.tr());
    SolverResult fb = session.run({session.name(prop.name + ".final.base"), {ts.init}, strengthened, {}});
    v.trace.push_back("final base: " + std::string(solver::toString(fb.kind)));
    if (!fb.isValid()) return unknownFrom(fb, Verdict::Reason::FailedBase);
    SolverResult fs = session.run({session.name(prop.name + ".final.induction"), stepPremise, prime(strengthened), {}});
    v.trace.push_back("final induction: " + std::string(solver::toString(fs.kind)));
    if (!fs.isValid()) return unknownFrom(fs, Verdict::Reason::NoInductiveStrengthening);
    v.invariant = strengthened;
    return finish(Verdict::Kind::Verified, Verdict::Reason::None);
  } catch (const SolverFailure& e) {
    v.solverError = true;
    v.detail = e.what();
    return finish(Verdict::Kind::Unknown, Verdict::Reason::SolverUnknown);
  } catch (const BudgetExhausted& e) {
    v.detail = e.what();
    return finish(Verdict::Kind::Unknown, Verdict::Reason::Timeout);
  }
}

std::vector<Candidate> contractCandidates(const frontend::ValidatedContract& c, const TransitionSystem& ts,
                                          const VerifierConfig& cfg, std::size_t* predicates) {
  StateSpace gamma = mkStateVars(c);
  auto P = extractAllPredicates(c, gamma, cfg.extraction);
  if (predicates) *predicates = P.size();
  return generateCandidates(P, ts.initDefaults, cfg.candidates);
}

Verdict verifyProperty(const frontend::ValidatedContract& c, const TransitionSystem& ts, const Property& prop,
                       const VerifierConfig& cfg) {
  std::size_t npred = 0;
  Verdict v = verifyProperty(ts, prop, [&] { return contractCandidates(c, ts, cfg, &npred); }, cfg);
  v.stats.predicates = npred;
  return v;
}

} // namespace dcv::inference
