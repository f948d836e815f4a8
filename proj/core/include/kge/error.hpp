#pragma once

#include <stdexcept>
#include <string>

namespace kge {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid arguments: dimension mismatches, bad parameters, kernel mismatches.
class InputError : public Error {
 public:
  explicit InputError(const std::string& msg) : Error(msg) {}
};

// Requested an explicit feature map for a kernel that has none.
class UnsupportedOracleError : public InputError {
 public:
  explicit UnsupportedOracleError(const std::string& msg) : InputError(msg) {}
};

// Argument outside the mathematical domain of the function.
class DomainError : public InputError {
 public:
  explicit DomainError(const std::string& msg) : InputError(msg) {}
};

// Numerical failure: non-convergence, failed factorization.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& msg) : Error(msg) {}
};

// Every eigenvalue fell below the retention floor.
class DegenerateSpectrumError : public NumericalError {
 public:
  explicit DegenerateSpectrumError(const std::string& msg) : NumericalError(msg) {}
};

// Data admits no usable scale (e.g. all pairwise distances zero).
class DegenerateDataError : public NumericalError {
 public:
  explicit DegenerateDataError(const std::string& msg) : NumericalError(msg) {}
};

// Sampler acceptance rate collapsed; the spec is practically unsatisfiable.
class PathologicalSpecError : public NumericalError {
 public:
  explicit PathologicalSpecError(const std::string& msg) : NumericalError(msg) {}
};

}  // namespace kge
