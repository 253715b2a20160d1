#include "quadrinv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace quadrinv {

std::string to_string(Epsilon eps) { return eps == Epsilon::plus ? "+1" : "-1"; }

namespace linalg {

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double spectral_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

double inverse_condition(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& s = svd.singularValues();
  if (s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

double condition_number(const CMatrix& a) {
  if (a.size() == 0 || a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<CMatrix> svd(a);
  const Vector& s = svd.singularValues();
  if (s(s.size() - 1) == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / s(s.size() - 1);
}

std::size_t nullity(const Vector& s, double tol, double scale) {
  const Eigen::Index count = s.size();
  if (count == 0) return 0;
  const double top = std::max(s(0), scale);
  if (top == 0.0) return static_cast<std::size_t>(count);

  constexpr double kGap = 1e6;
  constexpr double kRoundingFloor = 1e-13;
  double best_gap = 0.0;
  Eigen::Index best_cut = -1;
  for (Eigen::Index i = 0; i + 1 < count; ++i) {
    if (s(i) <= kRoundingFloor * top) break;
    if (s(i + 1) > tol * top) continue;
    const double gap = s(i + 1) == 0.0 ? std::numeric_limits<double>::infinity() : s(i) / s(i + 1);
    if (gap > kGap && gap > best_gap) {
      best_gap = gap;
      best_cut = i;
    }
  }
  if (best_cut >= 0) return static_cast<std::size_t>(count - 1 - best_cut);

  std::size_t zeros = 0;
  for (Eigen::Index i = 0; i < count; ++i) {
    if (s(i) <= tol * top) ++zeros;
  }
  return zeros;
}

Matrix orthonormal_basis(const Matrix& columns, double tol) {
  if (columns.cols() == 0) return Matrix(columns.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  Eigen::Index rank = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    while (rank < s.size() && s(rank) > tol * s(0)) ++rank;
  }
  Matrix basis = svd.matrixU().leftCols(rank);
  canonicalize_sign(basis);
  return basis;
}

Matrix realify(const CMatrix& columns, double tol) {
  Matrix parts(columns.rows(), 2 * columns.cols());
  parts << columns.real(), columns.imag();
  return orthonormal_basis(parts, tol);
}

Matrix null_space(const Matrix& a, double tol, double scale) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  Vector s = Vector::Zero(a.cols());
  s.head(svd.singularValues().size()) = svd.singularValues();
  const std::size_t dim = nullity(s, tol, scale);
  return svd.matrixV().rightCols(static_cast<Eigen::Index>(dim));
}

std::size_t symmetric_dimension(Eigen::Index order) {
  const auto n = static_cast<std::size_t>(order);
  return n * (n + 1) / 2;
}

Vector to_symmetric_coordinates(const Matrix& m) {
  const Eigen::Index order = m.rows();
  Vector coords(static_cast<Eigen::Index>(symmetric_dimension(order)));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < order; ++i) {
    for (Eigen::Index j = i; j < order; ++j) {
      coords(k++) = i == j ? m(i, i) : (m(i, j) + m(j, i)) / std::sqrt(2.0);
    }
  }
  return coords;
}

CVector to_symmetric_coordinates(const CMatrix& m) {
  const Eigen::Index order = m.rows();
  CVector coords(static_cast<Eigen::Index>(symmetric_dimension(order)));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < order; ++i) {
    for (Eigen::Index j = i; j < order; ++j) {
      coords(k++) = i == j ? m(i, i) : (m(i, j) + m(j, i)) / std::sqrt(2.0);
    }
  }
  return coords;
}

Matrix from_symmetric_coordinates(const Vector& coords, Eigen::Index order) {
  Matrix m(order, order);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < order; ++i) {
    for (Eigen::Index j = i; j < order; ++j) {
      if (i == j) {
        m(i, i) = coords(k++);
      } else {
        m(i, j) = m(j, i) = coords(k++) / std::sqrt(2.0);
      }
    }
  }
  return m;
}

Matrix symmetric_part(const Matrix& m) { return 0.5 * (m + m.transpose()); }

void canonicalize_sign(Matrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    auto col = m.col(c);
    const double top = col.cwiseAbs().maxCoeff();
    if (top == 0.0) continue;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      // Tie-break toward the first near-maximal entry so the choice does not
      // hinge on rounding in the last bits.
      if (std::abs(col(i)) >= top * (1.0 - 1e-9)) {
        if (col(i) < 0.0) col = -col;
        break;
      }
    }
  }
}

void canonicalize_phase(Eigen::Ref<CVector> v) {
  const double norm = v.norm();
  if (norm == 0.0) return;
  v /= norm;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-10) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex(mag, 0.0);
      return;
    }
  }
}

double line_distance(const Vector& a, const Vector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return std::numeric_limits<double>::infinity();
  const Vector ua = a / na;
  const Vector ub = b / nb;
  return std::min((ua - ub).norm(), (ua + ub).norm());
}

}  // namespace linalg
}  // namespace quadrinv
