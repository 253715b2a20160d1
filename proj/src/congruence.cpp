#include "quadrinv/congruence.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "quadrinv/linalg.hpp"

namespace quadrinv {

double congruence_residual(const Matrix& a, const Matrix& m, double mu) {
  const double scale = m.norm();
  if (scale == 0.0) return 0.0;
  return (a.transpose() * m * a - mu * m).norm() / scale;
}

namespace {

// Bound on the norm of M -> A^T M A - mu M; the nullspace threshold is taken
// relative to it so that A close to a root of mu times I keeps its full space.
double operator_scale(const Matrix& a, double mu) {
  const double norm = linalg::spectral_norm(a);
  return norm * norm + std::abs(mu);
}

Matrix symmetric_operator(const Matrix& a, double mu) {
  const Eigen::Index order = a.rows();
  const auto dim = static_cast<Eigen::Index>(linalg::symmetric_dimension(order));
  Matrix op(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Matrix e = linalg::from_symmetric_coordinates(Vector::Unit(dim, k), order);
    op.col(k) = linalg::to_symmetric_coordinates(Matrix(a.transpose() * e * a - mu * e));
  }
  return op;
}

void require_square(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1) throw PreconditionError("congruence: matrix must be square");
}

struct SearchOutcome {
  std::optional<InvertibleMember> member;
  std::size_t samples = 0;
  double best = 0.0;
};

SearchOutcome search_combinations(const std::vector<Matrix>& basis, std::size_t budget, std::uint64_t seed,
                                  const Tolerances& tol) {
  SearchOutcome out;
  const auto d = static_cast<Eigen::Index>(basis.size());
  const auto combine = [&](const Vector& c) {
    Matrix m = Matrix::Zero(basis.front().rows(), basis.front().cols());
    for (Eigen::Index i = 0; i < d; ++i) m += c(i) * basis[static_cast<std::size_t>(i)];
    return m;
  };
  const auto attempt = [&](const Vector& c) {
    ++out.samples;
    Matrix m = combine(c);
    const double ratio = linalg::inverse_condition(m);
    out.best = std::max(out.best, ratio);
    if (ratio > tol.singular) {
      out.member = InvertibleMember{std::move(m), c};
      return true;
    }
    return false;
  };

  for (Eigen::Index i = 0; i < d; ++i) {
    if (attempt(Vector::Unit(d, i))) return out;
  }
  std::vector<Vector> fixed(5, Vector(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    const double k = static_cast<double>(i + 1);
    const double sign = i % 2 == 0 ? 1.0 : -1.0;
    fixed[0](i) = 1.0;
    fixed[1](i) = sign;
    fixed[2](i) = k;
    fixed[3](i) = sign * k;
    fixed[4](i) = 1.0 / k;
  }
  for (const Vector& c : fixed) {
    if (attempt(c)) return out;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t t = 0; t < budget; ++t) {
    Vector c(d);
    for (Eigen::Index i = 0; i < d; ++i) c(i) = gauss(rng);
    if (attempt(c)) return out;
  }
  return out;
}

}  // namespace

SymmetricSolutionSpace solve_congruence(const Matrix& a, double mu, const Tolerances& tol) {
  require_square(a);
  if (mu == 0.0) throw PreconditionError("solve_congruence: mu must be non-zero");
  const Eigen::Index order = a.rows();
  const Matrix op = symmetric_operator(a, mu);

  Eigen::JacobiSVD<Matrix> svd(op, Eigen::ComputeFullV);
  SymmetricSolutionSpace space;
  space.mu = mu;
  space.singular_values = svd.singularValues();
  const auto dim = static_cast<Eigen::Index>(linalg::nullity(space.singular_values, tol.nullspace, operator_scale(a, mu)));
  Matrix coords = svd.matrixV().rightCols(dim);
  linalg::canonicalize_sign(coords);
  for (Eigen::Index k = 0; k < dim; ++k) {
    space.basis.push_back(linalg::from_symmetric_coordinates(coords.col(k), order));
    space.max_residual = std::max(space.max_residual, congruence_residual(a, space.basis.back(), mu));
  }
  return space;
}

GeneralSolutionSpace solve_general_congruence(const Matrix& a, double mu, const Tolerances& tol) {
  require_square(a);
  if (mu == 0.0) throw PreconditionError("solve_general_congruence: mu must be non-zero");
  const Eigen::Index order = a.rows();
  const Eigen::Index dim = order * order;
  // Column-major vec: vec(A^T Y A) = (A^T kron A^T) vec(Y).
  Matrix op(dim, dim);
  const Matrix at = a.transpose();
  for (Eigen::Index i = 0; i < order; ++i) {
    for (Eigen::Index j = 0; j < order; ++j) op.block(i * order, j * order, order, order) = at(i, j) * at;
  }
  op -= mu * Matrix::Identity(dim, dim);

  GeneralSolutionSpace space;
  space.mu = mu;
  Matrix kernel = linalg::null_space(op, tol.nullspace, operator_scale(a, mu));
  linalg::canonicalize_sign(kernel);
  for (Eigen::Index k = 0; k < kernel.cols(); ++k) {
    space.basis.push_back(Eigen::Map<const Matrix>(kernel.col(k).data(), order, order));
    space.max_residual = std::max(space.max_residual, congruence_residual(a, space.basis.back(), mu));
  }
  return space;
}

PredictedDimension predicted_dimension(const SpectralDecomposition& sd, Epsilon eps, const Tolerances& tol) {
  if (eps == Epsilon::minus && sd.order() % 2 == 1) return {0, true};
  SigmaSet sigma;
  try {
    sigma = sigma_epsilon(sd, eps, tol);
  } catch (const NotSemisimple& e) {
    throw NotApplicable(std::string("predicted_dimension: ") + e.what());
  }
  const auto r = static_cast<std::size_t>(sigma.r);
  const auto s = static_cast<std::size_t>(sigma.s);
  std::size_t dim = (r * r + r + s * s + s) / 2;
  for (const EigenCluster& cl : sigma.sigma) {
    const auto m = static_cast<std::size_t>(cl.multiplicity);
    dim += m * m;
  }
  return {dim, false};
}

MemberSearch invertible_member(const SymmetricSolutionSpace& space, std::size_t budget, std::uint64_t seed,
                               const Tolerances& tol) {
  if (space.dim() == 0) throw EmptySpace("invertible_member: solution space is {0}");
  const Eigen::Index order = space.order();

  // A vector killed by every basis element is killed by every combination.
  Matrix stacked(order * static_cast<Eigen::Index>(space.dim()), order);
  for (std::size_t i = 0; i < space.dim(); ++i) stacked.middleRows(static_cast<Eigen::Index>(i) * order, order) = space.basis[i];
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  if (s(s.size() - 1) <= tol.singular * s(0)) {
    Matrix kernel = svd.matrixV().rightCols(1);
    linalg::canonicalize_sign(kernel);
    return CertifiedSingular{kernel.col(0)};
  }

  SearchOutcome found = search_combinations(space.basis, budget, seed, tol);
  if (found.member) return *found.member;
  return NoneFound{found.samples, found.best};
}

std::optional<InvertibleMember> find_invertible_combination(const std::vector<Matrix>& basis, std::size_t budget,
                                                            std::uint64_t seed, const Tolerances& tol) {
  if (basis.empty()) return std::nullopt;
  return search_combinations(basis, budget, seed, tol).member;
}

std::size_t complex_symmetric_nullity(const Matrix& a, double mu, const Tolerances& tol) {
  require_square(a);
  const Eigen::Index order = a.rows();
  const auto dim = static_cast<Eigen::Index>(linalg::symmetric_dimension(order));
  const CMatrix ac = a.cast<Complex>();
  // Each coordinate direction carries its own phase so the arithmetic is
  // genuinely complex; phases do not change the rank.
  CMatrix op(dim, dim);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < order; ++i) {
    for (Eigen::Index j = i; j < order; ++j, ++k) {
      const Complex phase = std::polar(1.0, 0.7 * static_cast<double>(k + 1));
      CMatrix e = CMatrix::Zero(order, order);
      if (i == j) {
        e(i, i) = phase;
      } else {
        e(i, j) = e(j, i) = phase / std::sqrt(2.0);
      }
      op.col(k) = linalg::to_symmetric_coordinates(CMatrix(ac.transpose() * e * ac - mu * e));
    }
  }
  Eigen::JacobiSVD<CMatrix> svd(op);
  return linalg::nullity(svd.singularValues(), tol.nullspace, operator_scale(a, mu));
}

bool real_dim_equals_complex_dim_check(const Matrix& a, Epsilon eps, const Tolerances& tol) {
  return solve_congruence(a, value(eps), tol).dim() == complex_symmetric_nullity(a, value(eps), tol);
}

}  // namespace quadrinv
