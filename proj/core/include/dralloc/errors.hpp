#pragma once

#include <stdexcept>
#include <string>

namespace dra {

/// Raised by the config parser and loader. `line` is 1-based; 0 means the
/// problem is file-level rather than tied to a specific line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg, int line = 0)
      : std::runtime_error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Raised when an integration step produces a non-finite state.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& msg, double t)
      : std::runtime_error(msg + " at t=" + std::to_string(t)), t_(t) {}

  double time() const noexcept { return t_; }

 private:
  double t_;
};

}  // namespace dra
