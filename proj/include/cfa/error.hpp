#pragma once

#include <stdexcept>
#include <string>

namespace cfa {

/// Base of all library errors. The message is prefixed with the module name.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or command-line usage (exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data (exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or degenerate numeric conditions (exit code 3).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Process exit code for an exception escaping the CLI.
int exit_code_for(const std::exception& e) noexcept;

/// Writes a warning line to stderr.
void warn(const std::string& message);

}  // namespace cfa
