#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "quadrinv/congruence.hpp"
#include "quadrinv/geometry.hpp"
#include "quadrinv/homogeneous.hpp"
#include "quadrinv/io.hpp"
#include "quadrinv/spectral.hpp"
#include "quadrinv/types.hpp"

namespace quadrinv {

/// Coordinates of l(x0) in the eigenbasis of an ordered diagonalization.
///
/// coords = P l(x0), laid out as (a_1, b_1, ..., a_j, b_j, a_{j+1}, ...);
/// c_i = 2 a_i b_i for pair blocks and a_i^2 for singleton blocks.
struct EigenCoordinates {
  CVector coords;
  CVector c;
  int nonzero_count = 0;   // |c_i| > tol.support * ||coords||^2
  bool borderline = false;  // some |c_i| within two decades of the threshold
  int j = 0;                // number of pair blocks
};

EigenCoordinates eigencoordinates(const OrderedDiagonalization& od, const Vector& x0, const Tolerances& tol = {});

/// Weights with sum_i alpha_i c_i = 0 and every alpha_i != 0.
///
/// alpha_i = 1 except at i1 = argmax |c_i| (first index on ties), where
/// alpha_i1 = -c_i1^{-1} sum_{i != i1} alpha_i c_i. When |alpha_i1| is small,
/// alpha_i2 = 2 at the second largest |c_i| is tried as well and the choice
/// with larger |alpha_i1| is kept. Throws InsufficientSupport when fewer than
/// two c_i are non-zero.
CVector choose_alphas(const EigenCoordinates& ec, const Tolerances& tol = {});

struct InvariantForm {
  Matrix m;            // unpolished, or its projection onto C_eps(A)
  Matrix unpolished;   // real_part + mu0 * imag_part
  Matrix real_part;    // Re(P^T S P)
  Matrix imag_part;    // Im(P^T S P)
  double mu0 = 0.0;
  double congruence_residual = 0.0;  // ||A^T M A - eps M||_F / ||M||_F
  double point_residual = 0.0;       // membership residual of x0
  bool polished = false;
};

/// S = diag(alpha_1 K, ..., alpha_j K, alpha_{j+1}, ...) with K = [[0,1],[1,0]],
/// R = P^T S P, M = Re R + mu0 Im R. mu0 is taken from the grid
/// {0, 1, -1, 1/2, -1/2, 2, -2, 5, -5} (first value within a factor two of
/// the best inverse condition), then from 32 seeded uniform draws in
/// [-10, 10]. Throws NoInvertibleCombination. The result is then projected
/// onto the numerical solution space of A^T M A = eps M when that moves it by
/// at most 1e-6 relative, keeps it invertible and lowers the residual.
InvariantForm build_invariant_form(const Matrix& a, const OrderedDiagonalization& od, const EigenCoordinates& ec,
                                   const CVector& alphas, const Vector& x0, std::uint64_t seed = 0,
                                   const Tolerances& tol = {});

struct ThroughPoint {
  std::variant<Quadric, AffineVariety> object;
  Epsilon eps = Epsilon::plus;
  EigenCoordinates coordinates;
  std::vector<std::string> warnings;
  Matrix unpolished;  // eigenbasis construction before projection; empty for varieties

  bool is_quadric() const { return std::holds_alternative<Quadric>(object); }
};

/// A non-degenerate invariant quadric through x0 when at least two c_i are
/// non-zero, otherwise the smallest invariant affine variety through x0
/// (spanned by the non-zero spectral components of l(x0)). A is normalized
/// to |det| = 1 first. Throws ForbiddenPoint, NotSemisimple, NotApplicable.
ThroughPoint quadric_through_point(const SystemMatrix& system, const Vector& x0, Epsilon eps,
                                   std::uint64_t seed = 0, const Tolerances& tol = {});

/// The smallest A-invariant subspace containing l(x0) (realified), for a
/// semisimple decomposition.
Matrix minimal_invariant_subspace(const SpectralDecomposition& sd, const Vector& x0, const Tolerances& tol = {});

/// Frobenius-orthonormal basis of { M in span(space) : l(x0)^T M l(x0) = 0 }.
std::vector<Quadric> all_quadrics_through_point(const SymmetricSolutionSpace& space, const Vector& x0,
                                                const Tolerances& tol = {});

/// ||M - proj(M)||_F / ||M||_F for the projection onto span(basis); the basis
/// must be Frobenius-orthonormal.
double projection_defect(const Matrix& m, const std::vector<Quadric>& basis);

/// {"kind":"quadric","M":...,"mu":eps} or {"kind":"variety","base":...,"directions":...}.
io::json through_point_to_json(const ThroughPoint& result);

}  // namespace quadrinv
