#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace braillecam {

// Base class for every domain error raised by the library. `kind()` is a
// stable identifier used by the CLI and the Python bindings.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// Raised when a value violates a type invariant (bad config, bad options).
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error("InvalidArgument", what) {}
};

// Non-fatal findings collected alongside a result.
using Warnings = std::vector<std::string>;

}  // namespace braillecam
