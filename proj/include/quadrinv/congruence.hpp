#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "quadrinv/spectral.hpp"
#include "quadrinv/types.hpp"

namespace quadrinv {

/// Real symmetric solutions of A^T M A = mu M.
struct SymmetricSolutionSpace {
  double mu = 1.0;
  std::vector<Matrix> basis;  // Frobenius-orthonormal
  std::optional<std::size_t> predicted_dim;
  double max_residual = 0.0;  // max_i ||A^T M_i A - mu M_i||_F / ||M_i||_F
  Vector singular_values;     // of the operator on symmetric coordinates, decreasing

  std::size_t dim() const { return basis.size(); }
  Eigen::Index order() const { return basis.empty() ? 0 : basis.front().rows(); }
};

/// Null space of M -> A^T M A - mu M on the (n+1)(n+2)/2 symmetric
/// coordinates, by singular-value thresholding (see linalg::nullity).
SymmetricSolutionSpace solve_congruence(const Matrix& a, double mu, const Tolerances& tol = {});

/// Same equation over all (not necessarily symmetric) real matrices.
struct GeneralSolutionSpace {
  double mu = 1.0;
  std::vector<Matrix> basis;
  double max_residual = 0.0;
};

GeneralSolutionSpace solve_general_congruence(const Matrix& a, double mu, const Tolerances& tol = {});

/// dim C_eps(A) for semisimple A similar to eps*A^{-1}:
///   (r^2 + r + s^2 + s)/2 + sum over sigma_eps of m(lambda)^2.
/// For eps = -1 with odd order the value is 0 and `parity_forced_zero` is set.
struct PredictedDimension {
  std::size_t value = 0;
  bool parity_forced_zero = false;
};

/// Throws NotApplicable when A is not semisimple or not eps-similar.
PredictedDimension predicted_dimension(const SpectralDecomposition& sd, Epsilon eps, const Tolerances& tol = {});

struct InvertibleMember {
  Matrix m;
  Vector coefficients;  // with respect to the space's basis
};

/// Randomized search gave up; says nothing about existence.
struct NoneFound {
  std::size_t samples = 0;
  double best_inverse_condition = 0.0;  // best sigma_min / sigma_max seen
};

/// Every basis element annihilates `kernel`, so every combination is singular.
struct CertifiedSingular {
  Vector kernel;
};

using MemberSearch = std::variant<InvertibleMember, NoneFound, CertifiedSingular>;

/// Looks for an invertible M in the span: first the basis elements, then a
/// fixed list of small-integer combinations, then `budget` seeded Gaussian
/// combinations. Throws EmptySpace for a zero-dimensional space.
MemberSearch invertible_member(const SymmetricSolutionSpace& space, std::size_t budget, std::uint64_t seed,
                               const Tolerances& tol = {});

/// The same search over an arbitrary list of matrices (no certificate).
std::optional<InvertibleMember> find_invertible_combination(const std::vector<Matrix>& basis, std::size_t budget,
                                                            std::uint64_t seed, const Tolerances& tol = {});

/// Dimension of the complex symmetric solution space, computed with complex
/// arithmetic on the complex operator.
std::size_t complex_symmetric_nullity(const Matrix& a, double mu, const Tolerances& tol = {});

/// Real and complex symmetric solution spaces have the same dimension.
bool real_dim_equals_complex_dim_check(const Matrix& a, Epsilon eps, const Tolerances& tol = {});

/// ||A^T M A - mu M||_F / ||M||_F.
double congruence_residual(const Matrix& a, const Matrix& m, double mu);

}  // namespace quadrinv
