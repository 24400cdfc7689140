#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dcv::frontend {

struct SourceLoc {
  int line = 0;
  int column = 0;
};

enum class Severity { Error, Warning, Note };

struct Diagnostic {
  SourceLoc loc;
  Severity severity = Severity::Error;
  std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

std::string_view toString(Severity s);

/// `file:line:col: severity: message`
std::string format(const Diagnostic& d, std::string_view file);

/// JSON array of {file, line, column, severity, message} objects.
std::string formatJson(const Diagnostics& ds, std::string_view file);

bool hasErrors(const Diagnostics& ds);

} // namespace dcv::frontend
