#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "dcv/compiler/encode.hpp"
#include "dcv/frontend/parser.hpp"
#include "dcv/frontend/validate.hpp"
#include "dcv/logic/transition_system.hpp"

namespace dcv::compiler {

/// Initial-state formula and its zero-default part. Relations annotated
/// `.init`, and relations no rule writes, are left unconstrained.
struct InitFormulas {
  logic::Expr init;
  logic::Expr defaults;
};

InitFormulas buildInit(const frontend::ValidatedContract& c, const logic::StateSpace& gamma);

/// One transition per transaction rule, in rule order.
std::vector<logic::Transition> buildTransitions(const frontend::ValidatedContract& c,
                                                const logic::StateSpace& gamma,
                                                frontend::Diagnostics* diags = nullptr);

/// One safety property per violation-query rule.
std::vector<logic::Property> buildProperties(const frontend::ValidatedContract& c,
                                             const logic::StateSpace& gamma);

frontend::Checked<logic::TransitionSystem> compile(const frontend::ValidatedContract& c);

/// Parse, validate and compile in one go; diagnostics of every stage are kept.
struct Compiled {
  std::optional<frontend::ValidatedContract> contract;
  std::optional<logic::TransitionSystem> system;
  frontend::Diagnostics diagnostics;

  bool ok() const { return system.has_value(); }
};

Compiled compileSource(std::string_view source, std::string name = "contract");
Compiled compileFile(const std::filesystem::path& path);

} // namespace dcv::compiler
