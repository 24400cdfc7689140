#include "dcv/report/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dcv/compiler/compile.hpp"

namespace dcv::report {

using nlohmann::ordered_json;

PropertyReport fromVerdict(const inference::Verdict& v) {
  PropertyReport p;
  p.name = v.property;
  p.verdict = v.kind;
  p.reason = v.reason;
  if (v.verified()) p.invariant = logic::toString(v.invariant);
  p.plainInduction = v.plainInduction;
  p.survivors = v.survivors;
  p.refuted = v.refuted.size();
  p.seconds = v.stats.seconds;
  p.queries = v.stats.queries;
  p.predicates = v.stats.predicates;
  p.candidates = v.stats.candidates;
  p.rounds = v.stats.rounds;
  p.solverError = v.solverError;
  p.detail = v.detail;
  p.trace = v.trace;
  return p;
}

std::string ContractReport::verdict() const {
  if (inputError) return "input-error";
  bool all = std::all_of(properties.begin(), properties.end(),
                         [](const PropertyReport& p) { return p.verdict == inference::Verdict::Kind::Verified; });
  return all ? "verified" : "unknown";
}

bool ContractReport::solverError() const {
  return std::any_of(properties.begin(), properties.end(), [](const PropertyReport& p) { return p.solverError; });
}

ContractReport verifyFile(const std::filesystem::path& path, const inference::VerifierConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  ContractReport r;
  r.file = path.string();
  r.contract = path.stem().string();
  compiler::Compiled c = compiler::compileFile(path);
  for (const auto& d : c.diagnostics) r.diagnostics.push_back(frontend::format(d, r.file));
  if (c.contract) r.rules = c.contract->rules().size();
  if (!c.ok()) {
    r.inputError = true;
  } else {
    for (const auto& prop : c.system->properties)
      r.properties.push_back(fromVerdict(inference::verifyProperty(*c.contract, *c.system, prop, cfg)));
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

int exitCode(const std::vector<ContractReport>& reports) {
  auto any = [&](auto pred) { return std::any_of(reports.begin(), reports.end(), pred); };
  if (any([](const ContractReport& r) { return r.inputError; })) return 2;
  if (any([](const ContractReport& r) { return r.solverError(); })) return 3;
  if (any([](const ContractReport& r) { return r.verdict() != "verified"; })) return 1;
  return 0;
}

namespace {

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", s);
  return buf;
}

ordered_json toJson(const PropertyReport& p, bool withTrace) {
  ordered_json j;
  j["name"] = p.name;
  j["verdict"] = std::string(inference::toString(p.verdict));
  j["reason"] = std::string(inference::toString(p.reason));
  j["invariant"] = p.invariant ? ordered_json(*p.invariant) : ordered_json(nullptr);
  j["plainInduction"] = p.plainInduction;
  j["wallTime"] = p.seconds;
  j["solverQueries"] = p.queries;
  j["predicates"] = p.predicates;
  j["candidates"] = p.candidates;
  j["survivors"] = p.survivors.size();
  j["refuted"] = p.refuted;
  j["rounds"] = p.rounds;
  j["survivorFormulas"] = p.survivors;
  j["solverError"] = p.solverError;
  j["detail"] = p.detail;
  if (withTrace) j["trace"] = p.trace;
  return j;
}

ordered_json toJson(const ContractReport& r, bool withTrace) {
  ordered_json j;
  j["contract"] = r.contract;
  j["file"] = r.file;
  j["rules"] = r.rules;
  j["verdict"] = r.verdict();
  j["wallTime"] = r.seconds;
  j["diagnostics"] = r.diagnostics;
  ordered_json props = ordered_json::array();
  for (const auto& p : r.properties) props.push_back(toJson(p, withTrace));
  j["properties"] = std::move(props);
  return j;
}

} // namespace

std::string renderText(const ContractReport& r, bool withTrace) {
  std::ostringstream os;
  os << r.contract << ": " << r.verdict() << " (" << seconds(r.seconds) << " s)\n";
  for (const auto& d : r.diagnostics) os << "  " << d << '\n';
  for (const auto& p : r.properties) {
    os << "  property " << p.name << ": " << inference::toString(p.verdict);
    if (p.reason != inference::Verdict::Reason::None) os << " (" << inference::toString(p.reason) << ')';
    os << "\n    time " << seconds(p.seconds) << " s, " << p.queries << " queries, " << p.candidates
       << " candidates, " << p.survivors.size() << " survivors";
    if (p.plainInduction) os << ", plain induction";
    os << '\n';
    if (!p.detail.empty()) os << "    detail: " << p.detail << '\n';
    if (p.invariant && !p.plainInduction) {
      os << "    invariant:\n";
      for (const auto& s : p.survivors) os << "      " << s << '\n';
      os << "      ¬" << p.name << " (the property)\n";
    } else if (p.invariant) {
      os << "    invariant: " << *p.invariant << '\n';
    }
    if (withTrace)
      for (const auto& t : p.trace) os << "    | " << t << '\n';
  }
  return os.str();
}

std::string renderJson(const std::vector<ContractReport>& reports, const std::string& command, bool withTrace) {
  ordered_json j;
  j["schemaVersion"] = kSchemaVersion;
  j["command"] = command;
  ordered_json cs = ordered_json::array();
  for (const auto& r : reports) cs.push_back(toJson(r, withTrace));
  j["contracts"] = std::move(cs);
  return j.dump(2) + "\n";
}

std::string renderTable(const std::vector<ContractReport>& reports) {
  std::size_t w = std::string("benchmark").size();
  for (const auto& r : reports) w = std::max(w, r.contract.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(w)) << "benchmark" << "  " << std::right << std::setw(5) << "rules"
     << "  " << std::left << std::setw(11) << "verdict" << "  " << std::right << std::setw(9) << "seconds" << '\n';
  for (const auto& r : reports)
    os << std::left << std::setw(static_cast<int>(w)) << r.contract << "  " << std::right << std::setw(5) << r.rules
       << "  " << std::left << std::setw(11) << r.verdict() << "  " << std::right << std::setw(9)
       << seconds(r.seconds) << '\n';
  return os.str();
}

std::string dumpJson(const std::string& contract, const logic::TransitionSystem& ts) {
  ordered_json j;
  j["schemaVersion"] = kSchemaVersion;
  j["command"] = "compile";
  j["contract"] = contract;
  ordered_json vars = ordered_json::array();
  for (const auto& v : ts.stateVars)
    vars.push_back({{"name", v.name}, {"sort", v.sort.toString()}, {"relation", v.relation}, {"column", v.column}});
  j["stateVars"] = std::move(vars);
  ordered_json init = ordered_json::array();
  for (const auto& c : logic::conjuncts(ts.init)) init.push_back(logic::toString(c));
  j["init"] = std::move(init);
  ordered_json trs = ordered_json::array();
  for (const auto& t : ts.transitions) {
    ordered_json params = ordered_json::array();
    for (const auto& p : t.params) params.push_back({{"name", p.name}, {"sort", p.sort.toString()}});
    ordered_json body = ordered_json::array();
    for (const auto& c : logic::conjuncts(t.formula)) body.push_back(logic::toString(c));
    trs.push_back({{"name", t.name}, {"params", std::move(params)}, {"writes", t.writes}, {"formula", std::move(body)}});
  }
  j["transitions"] = std::move(trs);
  ordered_json props = ordered_json::array();
  for (const auto& p : ts.properties) props.push_back({{"name", p.name}, {"formula", logic::toString(p.formula)}});
  j["properties"] = std::move(props);
  return j.dump(2) + "\n";
}

} // namespace dcv::report
