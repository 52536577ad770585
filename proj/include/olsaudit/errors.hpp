#pragma once

#include <stdexcept>
#include <string>

namespace olsaudit {

// Error categories map onto the CLI exit codes:
//   config -> 2, data -> 3, numerical -> 4, resource -> 5
enum class ErrorKind { Config, Data, Numerical, Resource };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(ErrorKind::Config, msg) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& msg) : Error(ErrorKind::Data, msg) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& msg) : Error(ErrorKind::Numerical, msg) {}
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& msg) : Error(ErrorKind::Resource, msg) {}
};

// Specific failures thrown by the library.

class DimensionMismatchError : public DataError {
 public:
  explicit DimensionMismatchError(const std::string& msg) : DataError("dimension mismatch: " + msg) {}
};

class RankDeficientError : public NumericalError {
 public:
  explicit RankDeficientError(const std::string& msg) : NumericalError("rank deficient: " + msg) {}
};

class ZeroDirectionError : public NumericalError {
 public:
  ZeroDirectionError() : NumericalError("direction vector is zero") {}
};

class EigenFailureError : public NumericalError {
 public:
  explicit EigenFailureError(const std::string& msg) : NumericalError("eigendecomposition failed: " + msg) {}
};

class NonSquareInputError : public DataError {
 public:
  NonSquareInputError() : DataError("Gram matrix must be square") {}
};

class InvalidPartitionError : public DataError {
 public:
  explicit InvalidPartitionError(const std::string& msg) : DataError("invalid bucket partition: " + msg) {}
};

class CombinatorialBudgetError : public ResourceError {
 public:
  explicit CombinatorialBudgetError(const std::string& msg) : ResourceError("combinatorial budget exceeded: " + msg) {}
};

class BudgetExceedsTotalError : public DataError {
 public:
  explicit BudgetExceedsTotalError(const std::string& msg) : DataError("removal budget exceeds total: " + msg) {}
};

class UnitMismatchError : public ConfigError {
 public:
  explicit UnitMismatchError(const std::string& msg) : ConfigError("unit mismatch: " + msg) {}
};

class DegenerateUnfixableError : public NumericalError {
 public:
  explicit DegenerateUnfixableError(const std::string& msg) : NumericalError("degeneracy not fixable within budget: " + msg) {}
};

}  // namespace olsaudit
