#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "quadrinv/types.hpp"

// Hand-rolled generators and independent oracles for the tests.
namespace testing {

using quadrinv::Complex;
using quadrinv::Matrix;
using quadrinv::Vector;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double normal() { return gauss_(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Vector vector(Eigen::Index n, double scale = 1.0) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = scale * normal();
    return v;
  }

  Matrix matrix(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal();
    return m;
  }

  /// A Gaussian square matrix with condition number at most `cap`.
  Matrix well_conditioned(Eigen::Index n, double cap = 1e2) {
    for (;;) {
      Matrix m = matrix(n, n);
      Eigen::JacobiSVD<Matrix> svd(m);
      const Vector& s = svd.singularValues();
      if (s(0) / s(n - 1) <= cap) return m;
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

/// Dimension of { M symmetric : A^T M A = mu M } computed on the full n^2
/// unknowns with explicit symmetry constraints and a rank-revealing LU.
inline std::size_t brute_force_symmetric_dim(const Matrix& a, double mu, double threshold = 1e-9) {
  const Eigen::Index n = a.rows();
  const Eigen::Index unknowns = n * n;
  Matrix rows = Matrix::Zero(unknowns + unknowns, unknowns);
  // Equation rows: entries of A^T Y A - mu Y, with Y(i,j) = y[i*n + j].
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index row = i * n + j;
      for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index l = 0; l < n; ++l) rows(row, k * n + l) += a(k, i) * a(l, j);
      }
      rows(row, i * n + j) -= mu;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      rows(unknowns + i * n + j, i * n + j) += 1.0;
      rows(unknowns + i * n + j, j * n + i) -= 1.0;
    }
  }
  Eigen::FullPivLU<Matrix> lu(rows);
  lu.setThreshold(threshold);
  return static_cast<std::size_t>(unknowns - lu.rank());
}

/// Frobenius distance from `m` to span(basis) relative to ||m||_F, by least squares.
inline double span_defect(const Matrix& m, const std::vector<Matrix>& basis) {
  if (basis.empty()) return 1.0;
  Matrix columns(m.size(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    columns.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Vector>(basis[k].data(), basis[k].size());
  }
  const Vector target = Eigen::Map<const Vector>(m.data(), m.size());
  const Vector coeff = columns.colPivHouseholderQr().solve(target);
  return (columns * coeff - target).norm() / target.norm();
}

}  // namespace testing
