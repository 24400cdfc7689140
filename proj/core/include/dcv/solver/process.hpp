#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dcv/solver/ground.hpp"
#include "dcv/solver/model.hpp"
#include "dcv/solver/smtlib.hpp"

namespace dcv::solver {

struct SolverConfig {
  /// Executable path or name looked up in PATH.
  std::string path = "z3";
  /// Extra arguments placed before the script path. When empty, defaults
  /// are chosen from the executable name (see defaultFlags).
  std::vector<std::string> flags;
  /// Per-query wall-clock limit; zero answers Unknown without running.
  std::chrono::milliseconds timeout{10000};
  /// When set, every emitted script is also written to DIR/<name>.smt2.
  std::optional<std::filesystem::path> dumpDir;
  /// Replace quantifiers by ground instances before emitting (see ground()).
  /// Otherwise quantifiers are left to the solver.
  bool groundQuantifiers = true;
  GroundOptions grounding;
};

std::vector<std::string> defaultFlags(const std::string& path);

struct SolverResult {
  enum class Kind {
    Valid,           ///< unsat: the goal follows from the assumptions
    Invalid,         ///< sat: counter-model available in `model`
    Unknown,         ///< solver gave up or the time limit hit
    SpawnError,      ///< the solver could not be started
    MalformedOutput, ///< the solver answered something unrecognised
  };
  Kind kind = Kind::Unknown;
  /// Unknown: "timeout" or the solver's reason; errors: diagnostic text.
  std::string detail;
  Model model;
  /// Decoded probe values (Invalid only; missing entries are std::nullopt).
  std::vector<std::optional<bool>> probes;
  /// Raw solver output, truncated.
  std::string output;
  double seconds = 0;

  bool isValid() const { return kind == Kind::Valid; }
  bool isError() const { return kind == Kind::SpawnError || kind == Kind::MalformedOutput; }
};

std::string_view toString(SolverResult::Kind k);

/// Maps raw solver output to a result. Only a first answer line reading
/// exactly `unsat` yields Valid.
SolverResult interpretOutput(const std::string& output, const Script& script);

/// Runs the solver on one obligation in a fresh process.
SolverResult check(const Obligation& o, const SolverConfig& cfg);

/// Runs a prepared script.
SolverResult runScript(const Script& script, const std::string& name, const SolverConfig& cfg);

/// Replace characters that are awkward in file names.
std::string sanitizeFileName(const std::string& name);

} // namespace dcv::solver
