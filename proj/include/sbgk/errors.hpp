#pragma once

#include <stdexcept>
#include <string>

namespace sbgk {

/// Base of every error the library raises. `name()` is the stable identifier
/// reported by the CLI.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// The state (or its shift) reached the edge of the space or velocity grid.
struct SupportOverflow : Error {
  explicit SupportOverflow(const std::string& what) : Error("SupportOverflow", what) {}
};

/// A characteristic left the velocity truncation band.
struct StepOverflow : Error {
  explicit StepOverflow(const std::string& what) : Error("StepOverflow", what) {}
};

struct CflViolation : Error {
  explicit CflViolation(const std::string& what) : Error("CflViolation", what) {}
};

/// A defect measure value fell below the tolerance (corrupted kinetic state).
struct NegativeDefect : Error {
  explicit NegativeDefect(const std::string& what) : Error("NegativeDefect", what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

}  // namespace sbgk
