#pragma once

#include <stdexcept>
#include <string>

namespace rb {

/// Parameter outside its declared box, or point outside every partition cell.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Dimension or argument mismatch against a documented contract.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite coefficient values or other numeric breakdown.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear system whose factorization failed the residual tolerance.
class SingularSystemError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Requested reduced dimension exceeds the numerical rank of the data.
class RankError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing dual basis, unsupported mode, bad configuration value.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A partition cell received no training samples.
class PartitionCoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stability constant is non-positive where a positive one is required.
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rb
