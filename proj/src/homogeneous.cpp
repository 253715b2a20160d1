#include "quadrinv/homogeneous.hpp"

#include <cmath>

#include "quadrinv/linalg.hpp"

namespace quadrinv {

HomogeneousVector lift(const Vector& x) {
  HomogeneousVector h{Vector(x.size() + 1)};
  h.u.head(x.size()) = x;
  h.u(x.size()) = 1.0;
  return h;
}

std::optional<Vector> try_project(const HomogeneousVector& h, double tol_pr) {
  const double last = h.pr();
  if (std::abs(last) <= tol_pr * h.u.lpNorm<Eigen::Infinity>() || last == 0.0) return std::nullopt;
  return Vector(h.u.head(h.size() - 1) / last);
}

Vector project(const HomogeneousVector& h, double tol_pr) {
  auto x = try_project(h, tol_pr);
  if (!x) throw ForbiddenProjection("homogeneous vector lies in U_0 (pr(u) = 0)");
  return *x;
}

SystemMatrix::SystemMatrix(Matrix a, const Tolerances& tol) : a_(std::move(a)) {
  if (a_.rows() != a_.cols()) throw ParseError("system matrix must be square");
  if (a_.rows() < 3) throw ParseError("system matrix must have order n+1 >= 3");
  if (!a_.allFinite()) throw ParseError("system matrix has non-finite entries");
  Eigen::JacobiSVD<Matrix> svd(a_);
  const Vector& s = svd.singularValues();
  norm_ = s(0);
  if (s(s.size() - 1) <= tol.singular * norm_) {
    throw SingularMatrix("system matrix is singular (sigma_min / sigma_max = " +
                         std::to_string(norm_ > 0 ? s(s.size() - 1) / norm_ : 0.0) + ")");
  }
}

SystemMatrix SystemMatrix::from_blocks(const Matrix& a1, const Vector& b, const Vector& c, double d,
                                       const Tolerances& tol) {
  const Eigen::Index n = a1.rows();
  if (a1.cols() != n || b.size() != n || c.size() != n) {
    throw ParseError("block shapes do not match: A1 must be n x n, B and C of length n");
  }
  Matrix a(n + 1, n + 1);
  a.topLeftCorner(n, n) = a1;
  a.topRightCorner(n, 1) = c;
  a.bottomLeftCorner(1, n) = b.transpose();
  a(n, n) = d;
  return SystemMatrix(std::move(a), tol);
}

double SystemMatrix::determinant() const { return a_.fullPivLu().determinant(); }

double normalization_scale(const SystemMatrix& system) {
  const double det = std::abs(system.determinant());
  return std::pow(det, -1.0 / static_cast<double>(system.n() + 1));
}

SystemMatrix normalize(const SystemMatrix& system, const Tolerances& tol) {
  const double scale = normalization_scale(system);
  if (!std::isfinite(scale) || scale <= 0.0) throw SingularMatrix("cannot normalize a singular matrix");
  SystemMatrix out(scale * system.matrix(), tol);
  if (std::abs(std::abs(out.determinant()) - 1.0) > tol.determinant) {
    throw SingularMatrix("normalization did not reach |det| = 1; matrix too close to singular");
  }
  return out;
}

std::optional<Vector> try_evaluate_map(const SystemMatrix& system, const Vector& x, double tol_pr) {
  if (x.size() != system.n()) throw PreconditionError("point dimension does not match the system");
  return try_project(HomogeneousVector{system.matrix() * lift(x).u}, tol_pr);
}

Vector evaluate_map(const SystemMatrix& system, const Vector& x, double tol_pr) {
  auto y = try_evaluate_map(system, x, tol_pr);
  if (!y) throw ForbiddenPoint("point lies on the principal forbidden hyperplane");
  return *y;
}

SystemMatrix system_from_json(const io::json& doc, const Tolerances& tol) {
  if (!doc.is_object()) throw ParseError("system JSON must be an object");
  if (doc.contains("A")) {
    Matrix a = io::matrix_from_json(doc.at("A"), "A");
    if (doc.contains("n")) {
      if (!doc.at("n").is_number_integer()) throw ParseError("n must be an integer");
      if (doc.at("n").get<long>() + 1 != a.rows()) throw ParseError("n does not match the order of A");
    }
    return SystemMatrix(std::move(a), tol);
  }
  for (const char* key : {"A1", "B", "C", "d"}) {
    if (!doc.contains(key)) throw ParseError(std::string("system JSON needs either A or ") + key);
  }
  if (!doc.at("d").is_number()) throw ParseError("d must be a number");
  return SystemMatrix::from_blocks(io::matrix_from_json(doc.at("A1"), "A1"), io::vector_from_json(doc.at("B"), "B"),
                                   io::vector_from_json(doc.at("C"), "C"), doc.at("d").get<double>(), tol);
}

io::json system_to_json(const SystemMatrix& system) {
  io::json out;
  out["n"] = system.n();
  out["A"] = io::to_json(system.matrix());
  return out;
}

}  // namespace quadrinv
