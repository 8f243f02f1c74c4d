#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rwnet {

// Root of the library's exception hierarchy. `module()` names the component
// that raised the error so front-ends can attach a remediation hint.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

// Bad input: malformed files, out-of-range indices, violated preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Numerical failure or an internal-consistency check that did not hold.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public NumericalError {
 public:
  SingularMatrixError(std::size_t pivot, const std::string& what);

  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

}  // namespace rwnet
