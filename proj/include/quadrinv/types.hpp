#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace quadrinv {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Sign of the congruence A^T M A = eps * M. Only +1 and -1 occur once
/// det(A) = +-1 and M is invertible.
enum class Epsilon : int { plus = 1, minus = -1 };

constexpr double value(Epsilon eps) { return static_cast<double>(static_cast<int>(eps)); }

/// Principal square root of eps: 1 for plus, i for minus.
inline Complex sqrt_of(Epsilon eps) {
  return eps == Epsilon::plus ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
}

std::string to_string(Epsilon eps);

/// Numerical thresholds shared by every module. All are relative to the
/// scale named next to them.
struct Tolerances {
  double projection = 1e-12;   // |pr(u)| vs ||u||_inf
  double singular = 1e-10;     // sigma_min vs ||.||_2
  double determinant = 1e-10;  // | |det| - 1 | after normalization
  double cluster = 1e-6;       // eigenvalue merge distance vs ||A||_2
  double rank = 1e-8;          // eigenspace rank decision vs ||A||_2
  double pairing = 1e-7;       // lambda <-> eps/lambda matching vs max(1, |lambda|)
  double unit_circle = 1e-8;   // | |lambda| - 1 |
  double nullspace = 1e-9;     // singular values of the congruence operator vs largest
  double membership = 1e-8;    // |l(x)^T M l(x)| vs ||M||_2 ||l(x)||^2
  double support = 1e-10;      // |c_i| vs ||coords||^2
  double period = 1e-9;        // distance between unit homogeneous vectors
  double max_eigvec_condition = 1e12;
};

// Error hierarchy. The CLI maps the three intermediate bases onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// Results would not be trustworthy (conditioning, ambiguous pairing,
/// exhausted randomized search).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// The mathematical preconditions of an operation do not hold for the input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ForbiddenProjection : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ForbiddenPoint : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NotSemisimple : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NotApplicable : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class EmptySpace : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class InsufficientSupport : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class SpecSizeMismatch : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class PairingAmbiguity : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class IllConditionedEigenbasis : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class NoInvertibleCombination : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace quadrinv
