#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "dcv/frontend/ast.hpp"
#include "dcv/frontend/diagnostic.hpp"

namespace dcv::frontend {

/// Either a value or the diagnostics explaining why there is none.
template <typename T>
struct Checked {
  std::optional<T> value;
  Diagnostics diagnostics;

  bool ok() const { return value.has_value(); }
  explicit operator bool() const { return ok(); }
  const T& operator*() const { return *value; }
  const T* operator->() const { return &*value; }
};

/// Parse DeCon source. Succeeds on syntactically valid input; semantic
/// checks live in validate().
Checked<Contract> parse(std::string_view source, std::string contractName = "contract");

/// Read and parse a `.dcn` file; the contract is named after the file stem.
Checked<Contract> parseFile(const std::filesystem::path& path);

/// Render a contract back to DeCon source.
std::string print(const Contract& c);

} // namespace dcv::frontend
