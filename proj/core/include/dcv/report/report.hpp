#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dcv/inference/verify.hpp"
#include "dcv/logic/transition_system.hpp"

namespace dcv::report {

/// Version of the JSON layout described by docs/report.schema.json.
inline constexpr const char* kSchemaVersion = "1.0";

struct PropertyReport {
  std::string name;
  inference::Verdict::Kind verdict = inference::Verdict::Kind::Unknown;
  inference::Verdict::Reason reason = inference::Verdict::Reason::None;
  std::optional<std::string> invariant;
  bool plainInduction = false;
  std::vector<std::string> survivors;
  std::size_t refuted = 0;
  double seconds = 0;
  std::size_t queries = 0;
  std::size_t predicates = 0;
  std::size_t candidates = 0;
  std::size_t rounds = 0;
  bool solverError = false;
  std::string detail;
  std::vector<std::string> trace;
};

PropertyReport fromVerdict(const inference::Verdict& v);

struct ContractReport {
  std::string contract;
  std::string file;
  /// Rule clauses, violation queries included.
  std::size_t rules = 0;
  std::vector<PropertyReport> properties;
  /// Formatted diagnostics when the contract did not compile.
  std::vector<std::string> diagnostics;
  bool inputError = false;
  double seconds = 0;

  /// "verified" iff every property is; "input-error" or "unknown" otherwise.
  std::string verdict() const;
  bool solverError() const;
};

/// Parse, validate, compile and verify every property of one file.
ContractReport verifyFile(const std::filesystem::path& path, const inference::VerifierConfig& cfg);

/// 2 on any input error, else 3 on any solver failure, else 1 on any
/// unknown, else 0.
int exitCode(const std::vector<ContractReport>& reports);

std::string renderText(const ContractReport& r, bool withTrace = false);
/// `command` is "verify" or "bench".
std::string renderJson(const std::vector<ContractReport>& reports, const std::string& command,
                       bool withTrace = false);
/// benchmark | rules | verdict | seconds
std::string renderTable(const std::vector<ContractReport>& reports);

/// Machine-readable transition system dump ("compile" document).
std::string dumpJson(const std::string& contract, const logic::TransitionSystem& ts);

} // namespace dcv::report
