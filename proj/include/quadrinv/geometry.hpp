#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "quadrinv/homogeneous.hpp"
#include "quadrinv/io.hpp"
#include "quadrinv/spectral.hpp"
#include "quadrinv/types.hpp"

namespace quadrinv {

/// Inertia of a symmetric matrix.
struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;

  bool operator==(const Signature&) const = default;
};

Signature signature_of(const Matrix& symmetric, double tol_sing = Tolerances{}.singular);

/// Q(M) = { x : l(x)^T M l(x) = 0 } for a symmetric M of order n+1.
class Quadric {
 public:
  /// Stores the symmetric part of `m`; zero eigenvalues are those at or below
  /// tol_sing * ||M||_2.
  explicit Quadric(const Matrix& m, double tol_sing = Tolerances{}.singular);

  const Matrix& matrix() const { return m_; }
  const Signature& signature() const { return signature_; }
  bool degenerate() const { return signature_.zero > 0; }
  bool indefinite() const { return signature_.positive > 0 && signature_.negative > 0; }
  int rank() const { return signature_.positive + signature_.negative; }
  double norm() const { return norm_; }

  /// l(x)^T M l(x).
  double value(const Vector& x) const;

 private:
  Matrix m_;
  Signature signature_;
  double norm_ = 0.0;
};

/// |l(x)^T M l(x)| <= tol_mem * ||M||_2 * ||l(x)||^2.
bool quadric_contains(const Quadric& q, const Vector& x, double tol_mem = Tolerances{}.membership);

/// Relative membership residual |l(x)^T M l(x)| / (||M||_2 ||l(x)||^2).
double membership_residual(const Quadric& q, const Vector& x);

/// S_U = q(U \ U_0): the point `base` plus the span of `directions`.
struct AffineVariety {
  Vector base;        // the point of the variety closest to the origin
  Matrix directions;  // n x (k-1), orthonormal columns

  int dim() const { return static_cast<int>(directions.cols()); }
  /// Columns l(base), (d_1, 0), ..., (d_{k-1}, 0): a basis of U.
  Matrix homogeneous_basis() const;
  double distance(const Vector& x) const;
  bool contains(const Vector& x, double tol_mem = Tolerances{}.membership) const;
  /// base + sum_i t_i d_i.
  Vector point(const Vector& t) const;
};

/// The affine variety of a subspace U of R^{n+1} given by spanning columns;
/// nullopt when U is contained in U_0.
std::optional<AffineVariety> variety_from_subspace(const Matrix& spanning, const Tolerances& tol = {});

/// ||(I - Q Q^T) A Q||_F <= tol * ||A||_2 for an orthonormal basis Q of span(basis).
bool subspace_is_invariant(const Matrix& a, const Matrix& basis, double tol = 1e-9);

struct InvarianceReport {
  std::optional<double> mu;  // empty: not invariant
  double residual = 0.0;     // ||A^T M A - mu* M||_F / ||M||_F
  bool degenerate = false;
  bool low_rank = false;  // rank(M) <= 2
  bool definite = false;  // no sign change among non-zero eigenvalues

  /// The algebraic condition characterizes geometric invariance only for
  /// indefinite M of rank > 2.
  bool geometric_equivalence() const { return !low_rank && !definite; }
};

/// mu* = <A^T M A, M>_F / ||M||_F^2, accepted when the residual is at most
/// tol.nullspace and mu* is non-zero.
InvarianceReport verify_invariance(const Quadric& q, const SystemMatrix& system, const Tolerances& tol = {});

struct FixedPoint {
  Vector x;
  double lambda = 0.0;
};

/// One fixed point per real eigenvalue whose eigenspace leaves U_0: the
/// point of the fixed-point variety closest to the origin.
std::vector<FixedPoint> fixed_points(const SystemMatrix& system, const SpectralDecomposition& sd,
                                     const Tolerances& tol = {});

struct InvariantVariety {
  AffineVariety variety;
  std::vector<Complex> eigenvalues;  // spectrum of A restricted to U
};

/// Varieties S_U for conjugation-closed unions of up to `max_groups`
/// eigenspace groups, plus every codimension-one span that drops a single
/// real eigenvector. Proper subspaces only; duplicates removed.
/// Throws NotSemisimple.
std::vector<InvariantVariety> invariant_affine_varieties(const SystemMatrix& system, const SpectralDecomposition& sd,
                                                         std::size_t max_groups = 3, const Tolerances& tol = {});

struct InU0 {};

/// The line of R^n defined by U = span{v + conj v, i (v - conj v)} for a
/// non-real eigenpair. Requires |lambda| != 1 (eps = +1) or lambda^2 != -1
/// (eps = -1); throws NotApplicable otherwise.
std::variant<AffineVariety, InU0> invariant_line_for_pair(const SystemMatrix& system, Complex lambda,
                                                          const CVector& v, Epsilon eps = Epsilon::plus,
                                                          const Tolerances& tol = {});

io::json quadric_to_json(const Quadric& q);
Quadric quadric_from_json(const io::json& doc);
io::json variety_to_json(const AffineVariety& v);

}  // namespace quadrinv
