#pragma once

#include <stdexcept>
#include <string>

namespace greenq {

// Invalid parameters or malformed input (CLI exit code 2).
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Configured resource limit exceeded (CLI exit code 3).
class budget_error : public std::runtime_error {
 public:
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure such as a non-converged eigensolver.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace greenq
