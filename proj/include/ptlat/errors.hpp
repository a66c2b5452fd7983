#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ptlat {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failures of the numerical kind (exit code 2 in the CLI).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DepthTooLarge : public Error {
 public:
  DepthTooLarge(std::size_t depth, std::size_t n)
      : Error("coupling depth " + std::to_string(depth) + " needs 2K+1 <= n, got n = " +
              std::to_string(n)),
        depth_(depth),
        n_(n) {}
  std::size_t depth() const { return depth_; }
  std::size_t size() const { return n_; }

 private:
  std::size_t depth_;
  std::size_t n_;
};

class NonFinite : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotSymmetrizable : public NumericalError {
 public:
  explicit NotSymmetrizable(std::size_t depth)
      : NumericalError("off-diagonal product sup*sub is not positive at depth " +
                       std::to_string(depth)),
        depth_(depth) {}
  /// 1-based position of the first failing off-diagonal pair.
  std::size_t depth() const { return depth_; }

 private:
  std::size_t depth_;
};

class NoConvergence : public NumericalError {
 public:
  explicit NoConvergence(std::size_t max_iterations, const std::string& where = {})
      : NumericalError("QR iteration did not converge within " + std::to_string(max_iterations) +
                       " iterations" + (where.empty() ? std::string{} : " (" + where + ")")),
        max_iterations_(max_iterations) {}
  std::size_t max_iterations() const { return max_iterations_; }

 private:
  std::size_t max_iterations_;
};

class NotAnEigenvalue : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateEigenvalue : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateSpectrum : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UnexpectedKernelDimension : public NumericalError {
 public:
  UnexpectedKernelDimension(std::size_t got, std::size_t expected)
      : NumericalError("Dieudonne kernel has dimension " + std::to_string(got) + ", expected " +
                       std::to_string(expected)),
        dimension_(got) {}
  std::size_t dimension() const { return dimension_; }

 private:
  std::size_t dimension_;
};

class AnsatzKernelNotOneDimensional : public NumericalError {
 public:
  explicit AnsatzKernelNotOneDimensional(std::size_t nullity)
      : NumericalError("banded ansatz system has nullity " + std::to_string(nullity) +
                       " instead of 1"),
        nullity_(nullity) {}
  std::size_t nullity() const { return nullity_; }

 private:
  std::size_t nullity_;
};

class DegenerateParameters : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularMatrix : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class Overflow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotPositiveDefinite : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularTheta : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoSignChange : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MultipleTransitions : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A closed-form element disagrees with the exact Dieudonne solution.
class Mismatch : public Error {
 public:
  Mismatch(std::size_t row, std::size_t col, const std::string& got, const std::string& expected)
      : Error("element (" + std::to_string(row) + "," + std::to_string(col) + "): got " + got +
              ", expected " + expected),
        row_(row),
        col_(col) {}
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

}  // namespace ptlat
