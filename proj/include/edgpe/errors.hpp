#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace edgpe {

// Process exit codes shared by the CLI and the error types below.
enum class ExitCode : int {
  ok = 0,
  non_convergence = 2,
  spreading_detected = 3,
  under_resolved = 4,
  usage = 64,
  config = 65,
  failure = 1,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

// One violated invariant in a configuration or parameter set.
struct Violation {
  std::string code;     // stable machine-readable key, e.g. "p_range"
  std::string message;  // human-readable explanation
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

class UnderResolved : public Error {
 public:
  explicit UnderResolved(const std::string& what) : Error(ExitCode::under_resolved, what) {}
};

class NumericalOverflow : public Error {
 public:
  explicit NumericalOverflow(const std::string& what) : Error(ExitCode::under_resolved, what) {}
};

class InvalidBracket : public Error {
 public:
  explicit InvalidBracket(const std::string& what) : Error(ExitCode::failure, what) {}
};

class ShootingError : public Error {
 public:
  explicit ShootingError(const std::string& what) : Error(ExitCode::failure, what) {}
};

}  // namespace edgpe
