#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bekk {

/// Shape or length mismatch between arguments.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation, e.g. a fixed
/// point requested for a model whose spectral radius is not below one.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Floating-point breakdown: eigen-solver failure, a linear solve that should
/// have produced a positive definite result but did not, etc.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ValidationIssue {
  std::string field;
  std::string message;
};

/// Raised by model validation; carries every failing field, not just the first.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues);

  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

/// Model or state file that parsed as JSON but violates the schema, or did
/// not parse at all.
class SchemaError : public std::invalid_argument {
 public:
  SchemaError(std::string field, const std::string& message);

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace bekk
