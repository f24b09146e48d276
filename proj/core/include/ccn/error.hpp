#pragma once

#include <stdexcept>
#include <string>

namespace ccn {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The ad hoc budget cannot hold one copy of every content (M > nK).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A content has neither a wireless holder nor a base station to serve it.
class NoHolderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested (alpha, beta, mu, cell rule) combination has no closed form.
class UnsupportedRegime : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace ccn
