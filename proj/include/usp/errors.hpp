#pragma once

#include <stdexcept>
#include <string>

namespace usp {

struct SingularMatrixError : std::runtime_error {
  explicit SingularMatrixError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionError : std::runtime_error {
  explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ComplexSpectrumError : std::runtime_error {
  explicit ComplexSpectrumError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IndefiniteOperatorError : std::runtime_error {
  explicit IndefiniteOperatorError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateConstraintsError : std::runtime_error {
  explicit DegenerateConstraintsError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidArgumentError : std::runtime_error {
  explicit InvalidArgumentError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " (at offset " + std::to_string(offset) + ")"), offset(offset) {}
  std::size_t offset;
};

struct UnresolvedError : std::runtime_error {
  explicit UnresolvedError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace usp
