#pragma once

#include <optional>

#include "quadrinv/io.hpp"
#include "quadrinv/types.hpp"

namespace quadrinv {

/// A point of R^{n+1} read as homogeneous coordinates of a point of R^n.
struct HomogeneousVector {
  Vector u;

  Eigen::Index size() const { return u.size(); }
  /// Last coordinate, the one that must not vanish for projection.
  double pr() const { return u(u.size() - 1); }
};

/// l(x) = (x_1, ..., x_n, 1).
HomogeneousVector lift(const Vector& x);

/// q(u) = (u_1/u_{n+1}, ..., u_n/u_{n+1}), or nullopt when
/// |u_{n+1}| <= tol_pr * ||u||_inf (u lies in U_0 up to tolerance).
std::optional<Vector> try_project(const HomogeneousVector& u, double tol_pr = Tolerances{}.projection);

/// As try_project, throwing ForbiddenProjection instead of returning nullopt.
Vector project(const HomogeneousVector& u, double tol_pr = Tolerances{}.projection);

/// The order-(n+1) matrix of the map F = q o A o l,
///
///     A = [ A1  C^T ]
///         [ B    d  ]
///
/// so that F_i(x) = (sum_j a_ij x_j + c_i) / (sum_j b_j x_j + d).
/// Immutable; construction rejects non-square, n < 2 and singular input.
class SystemMatrix {
 public:
  explicit SystemMatrix(Matrix a, const Tolerances& tol = {});

  static SystemMatrix from_blocks(const Matrix& a1, const Vector& b, const Vector& c, double d,
                                  const Tolerances& tol = {});

  int n() const { return static_cast<int>(a_.rows()) - 1; }
  const Matrix& matrix() const { return a_; }

  Matrix a1() const { return a_.topLeftCorner(n(), n()); }
  Vector b() const { return a_.row(n()).head(n()).transpose(); }
  Vector c() const { return a_.col(n()).head(n()); }
  double d() const { return a_(n(), n()); }

  double determinant() const;
  double norm() const { return norm_; }

 private:
  Matrix a_;
  double norm_ = 0.0;
};

/// Rescales A by |det A|^{-1/(n+1)} so that |det| = 1. F is unchanged.
/// Throws SingularMatrix when |det| cannot be brought to 1 within
/// tol.determinant.
SystemMatrix normalize(const SystemMatrix& system, const Tolerances& tol = {});

/// Scale factor used by normalize.
double normalization_scale(const SystemMatrix& system);

/// F(x) = q(A l(x)); nullopt on the principal forbidden hyperplane.
std::optional<Vector> try_evaluate_map(const SystemMatrix& system, const Vector& x,
                                       double tol_pr = Tolerances{}.projection);

/// F(x), throwing ForbiddenPoint when the shared denominator vanishes.
Vector evaluate_map(const SystemMatrix& system, const Vector& x, double tol_pr = Tolerances{}.projection);

/// Accepts {"A": [[...]], "n": optional} or {"A1": [[...]], "B": [...],
/// "C": [...], "d": x}. Throws ParseError on malformed input and
/// SingularMatrix on singular A.
SystemMatrix system_from_json(const io::json& doc, const Tolerances& tol = {});
io::json system_to_json(const SystemMatrix& system);

}  // namespace quadrinv
