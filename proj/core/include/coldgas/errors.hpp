#pragma once

#include <stdexcept>
#include <string>

namespace coldgas {

/// Base of every error raised by the toolkit.
///
/// `code()` is "<module>.<kind>", e.g. "scattering.RangeTooSmall"; the CLI
/// forwards it verbatim in its machine-readable error stream.
class Error : public std::runtime_error {
 public:
  Error(std::string module, std::string kind, const std::string& message);

  const std::string& module() const noexcept { return module_; }
  const std::string& kind() const noexcept { return kind_; }
  std::string code() const { return module_ + "." + kind_; }

 private:
  std::string module_;
  std::string kind_;
};

/// Precondition violation on an argument (negative density, z outside
/// [0,1], ...). Raised by every module; the kind is always "DomainError".
class DomainError : public Error {
 public:
  DomainError(std::string module, const std::string& message)
      : Error(std::move(module), "DomainError", message) {}
};

}  // namespace coldgas
