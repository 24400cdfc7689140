#include "dcv/compiler/compile.hpp"

#include <fstream>
#include <sstream>

namespace dcv::compiler {

using namespace logic;
namespace fe = frontend;

InitFormulas buildInit(const fe::ValidatedContract& c, const StateSpace& gamma) {
  std::vector<Expr> eqs;
  for (const auto& sv : gamma.vars()) {
    if (c.contract().hasAnnotation(sv.relation, fe::AnnotationKind::Init)) continue;
    // Read-only relations act as constructor arguments.
    if (!c.writtenRelations().count(sv.relation)) continue;
    Expr zero = sv.sort.isMap() ? mkConstMap(sv.sort, defaultValue(sv.sort.value()))
                                : defaultValue(sv.sort);
    eqs.push_back(mkEq(sv.expr(), zero));
  }
  InitFormulas out;
  out.defaults = mkAnd(eqs);
  out.init = mkAnd(out.defaults, uintConstraints(gamma.vars()));
  return out;
}

std::vector<Transition> buildTransitions(const fe::ValidatedContract& c, const StateSpace& gamma,
                                         fe::Diagnostics* diags) {
  Encoder enc(c, gamma);
  std::vector<Transition> out;
  std::map<std::string, int> seen;
  for (std::size_t ri : c.transactionRules()) {
    Transition t = enc.encodeTransaction(ri);
    if (int n = ++seen[t.name]; n > 1) t.name += "#" + std::to_string(n);
    out.push_back(std::move(t));
  }
  if (diags) diags->insert(diags->end(), enc.diagnostics().begin(), enc.diagnostics().end());
  return out;
}

std::vector<Property> buildProperties(const fe::ValidatedContract& c, const StateSpace& gamma) {
  Encoder enc(c, gamma);
  std::vector<Property> out;
  std::map<std::string, int> seen;
  for (std::size_t ri : c.violationRules()) {
    std::string name = c.rules()[ri].head.relation;
    if (int n = ++seen[name]; n > 1) name += "#" + std::to_string(n);
    out.push_back(enc.encodeProperty(ri, name));
  }
  return out;
}

fe::Checked<TransitionSystem> compile(const fe::ValidatedContract& c) {
  fe::Checked<TransitionSystem> out;
  StateSpace gamma = mkStateVars(c);
  TransitionSystem ts;
  ts.stateVars = gamma.vars();
  auto init = buildInit(c, gamma);
  ts.init = init.init;
  ts.initDefaults = init.defaults;
  ts.transitions = buildTransitions(c, gamma, &out.diagnostics);
  ts.properties = buildProperties(c, gamma);
  if (fe::hasErrors(out.diagnostics)) return out;
  if (auto bad = ts.checkWellFormed()) {
    out.diagnostics.push_back({{1, 1}, fe::Severity::Error, "internal: " + *bad});
    return out;
  }
  out.value = std::move(ts);
  return out;
}

Compiled compileSource(std::string_view source, std::string name) {
  Compiled out;
  auto parsed = fe::parse(source, std::move(name));
  out.diagnostics = parsed.diagnostics;
  if (!parsed) return out;
  auto valid = fe::validate(std::move(*parsed.value));
  out.diagnostics.insert(out.diagnostics.end(), valid.diagnostics.begin(), valid.diagnostics.end());
  if (!valid) return out;
  out.contract = std::move(valid.value);
  auto ts = compile(*out.contract);
  out.diagnostics.insert(out.diagnostics.end(), ts.diagnostics.begin(), ts.diagnostics.end());
  if (ts) out.system = std::move(ts.value);
  return out;
}

Compiled compileFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    Compiled out;
    out.diagnostics.push_back({{0, 0}, fe::Severity::Error, "cannot read " + path.string()});
    return out;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return compileSource(ss.str(), path.stem().string());
}

} // namespace dcv::compiler
