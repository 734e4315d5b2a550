#pragma once

#include <stdexcept>
#include <string>

namespace ridgebart {

/// Base class for every error raised by the library. `kind()` is a short
/// machine-readable tag used by the CLI when reporting failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// Bad or inconsistent user input (CSV, schema, flags).
class DataError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "data"; }
};

class ConstantColumnError : public DataError {
 public:
  using DataError::DataError;
  const char* kind() const noexcept override { return "constant_column"; }
};

class NonFiniteValueError : public DataError {
 public:
  using DataError::DataError;
  const char* kind() const noexcept override { return "non_finite"; }
};

class DimensionMismatchError : public DataError {
 public:
  using DataError::DataError;
  const char* kind() const noexcept override { return "dimension_mismatch"; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config"; }
};

/// Structural misuse of a tree (growing an internal node, pruning a node
/// that has grandchildren, ...).
class TreeStructureError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "tree_structure"; }
};

class NoSplittableVariable : public Error {
 public:
  NoSplittableVariable() : Error("no splittable variable at node") {}
  const char* kind() const noexcept override { return "no_splittable_variable"; }
};

/// Cholesky failure on a leaf precision matrix.
class NumericalError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "numerical"; }
};

// Model-file loading.
class FormatError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "format"; }
};

class VersionMismatchError : public FormatError {
 public:
  using FormatError::FormatError;
  const char* kind() const noexcept override { return "version_mismatch"; }
};

class TruncatedStreamError : public FormatError {
 public:
  using FormatError::FormatError;
  const char* kind() const noexcept override { return "truncated_stream"; }
};

class InvariantViolationError : public FormatError {
 public:
  using FormatError::FormatError;
  const char* kind() const noexcept override { return "invariant_violation"; }
};

}  // namespace ridgebart
