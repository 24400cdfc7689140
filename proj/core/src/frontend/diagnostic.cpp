#include "dcv/frontend/diagnostic.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace dcv::frontend {

std::string_view toString(Severity s) {
  switch (s) {
  case Severity::Error: return "error";
  case Severity::Warning: return "warning";
  case Severity::Note: return "note";
  }
  return "?";
}

std::string format(const Diagnostic& d, std::string_view file) {
  std::string out(file);
  out += ':' + std::to_string(d.loc.line) + ':' + std::to_string(d.loc.column) + ": ";
  out += toString(d.severity);
  out += ": ";
  out += d.message;
  return out;
}

std::string formatJson(const Diagnostics& ds, std::string_view file) {
  auto arr = nlohmann::json::array();
  for (const auto& d : ds) {
    arr.push_back({{"file", file},
                   {"line", d.loc.line},
                   {"column", d.loc.column},
                   {"severity", toString(d.severity)},
                   {"message", d.message}});
  }
  return arr.dump(2);
}

bool hasErrors(const Diagnostics& ds) {
  return std::any_of(ds.begin(), ds.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

} // namespace dcv::frontend
