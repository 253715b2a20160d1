#include "quadrinv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "quadrinv/linalg.hpp"

namespace quadrinv {

Signature signature_of(const Matrix& symmetric, double tol_sing) {
  Signature sig;
  if (symmetric.size() == 0) return sig;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(linalg::symmetric_part(symmetric), Eigen::EigenvaluesOnly);
  const Vector& ev = solver.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= tol_sing * scale || scale == 0.0) {
      ++sig.zero;
    } else if (ev(i) > 0.0) {
      ++sig.positive;
    } else {
      ++sig.negative;
    }
  }
  return sig;
}

Quadric::Quadric(const Matrix& m, double tol_sing) : m_(linalg::symmetric_part(m)) {
  if (m.rows() != m.cols() || m.rows() < 2) throw PreconditionError("quadric matrix must be square of order >= 2");
  signature_ = signature_of(m_, tol_sing);
  norm_ = linalg::spectral_norm(m_);
}

double Quadric::value(const Vector& x) const {
  const Vector u = lift(x).u;
  return u.dot(m_ * u);
}

double membership_residual(const Quadric& q, const Vector& x) {
  if (q.norm() == 0.0) return 0.0;
  const Vector u = lift(x).u;
  return std::abs(u.dot(q.matrix() * u)) / (q.norm() * u.squaredNorm());
}

bool quadric_contains(const Quadric& q, const Vector& x, double tol_mem) {
  return membership_residual(q, x) <= tol_mem;
}

Matrix AffineVariety::homogeneous_basis() const {
  const Eigen::Index n = base.size();
  Matrix basis = Matrix::Zero(n + 1, 1 + directions.cols());
  basis.col(0) = lift(base).u;
  basis.block(0, 1, n, directions.cols()) = directions;
  return basis;
}

double AffineVariety::distance(const Vector& x) const {
  Vector r = x - base;
  r -= directions * (directions.transpose() * r);
  return r.norm();
}

bool AffineVariety::contains(const Vector& x, double tol_mem) const {
  return distance(x) <= tol_mem * (1.0 + x.norm());
}

Vector AffineVariety::point(const Vector& t) const { return base + directions * t; }

std::optional<AffineVariety> variety_from_subspace(const Matrix& spanning, const Tolerances& tol) {
  const Matrix q = linalg::orthonormal_basis(spanning);
  const Eigen::Index k = q.cols();
  if (k == 0) return std::nullopt;
  const Eigen::Index n = q.rows() - 1;
  const Vector p = q.row(n).transpose();
  if (p.norm() <= tol.projection) return std::nullopt;

  // Split U into one vector with pr = 1 and k-1 vectors with pr = 0.
  const Vector first = q * p / p.squaredNorm();
  Eigen::JacobiSVD<Matrix> svd(Matrix(p), Eigen::ComputeFullU);
  const Matrix rest = q * svd.matrixU().rightCols(k - 1);

  AffineVariety variety;
  variety.directions = linalg::orthonormal_basis(rest.topRows(n));
  variety.base = first.head(n);
  variety.base -= variety.directions * (variety.directions.transpose() * variety.base);
  return variety;
}

bool subspace_is_invariant(const Matrix& a, const Matrix& basis, double tol) {
  const Matrix q = linalg::orthonormal_basis(basis);
  const Matrix aq = a * q;
  return (aq - q * (q.transpose() * aq)).norm() <= tol * linalg::spectral_norm(a);
}

InvarianceReport verify_invariance(const Quadric& q, const SystemMatrix& system, const Tolerances& tol) {
  const Matrix& a = system.matrix();
  const Matrix& m = q.matrix();
  InvarianceReport report;
  report.degenerate = q.degenerate();
  report.low_rank = q.rank() <= 2;
  report.definite = q.signature().positive == 0 || q.signature().negative == 0;

  const double scale = m.squaredNorm();
  if (scale == 0.0) {
    report.residual = 0.0;
    return report;
  }
  const Matrix image = a.transpose() * m * a;
  const double mu = (image.array() * m.array()).sum() / scale;
  report.residual = (image - mu * m).norm() / std::sqrt(scale);
  if (report.residual <= tol.nullspace && std::abs(mu) > tol.nullspace) report.mu = mu;
  return report;
}

std::vector<FixedPoint> fixed_points(const SystemMatrix& system, const SpectralDecomposition& sd,
                                     const Tolerances& tol) {
  std::vector<FixedPoint> out;
  if (sd.order() != system.n() + 1) throw PreconditionError("fixed_points: decomposition does not match the system");
  for (std::size_t c = 0; c < sd.eigenvalues.size(); ++c) {
    if (sd.eigenvalues[c].value.imag() != 0.0) continue;
    std::vector<Eigen::Index> columns;
    for (std::size_t k = 0; k < sd.column_cluster.size(); ++k) {
      if (sd.column_cluster[k] == static_cast<int>(c)) columns.push_back(static_cast<Eigen::Index>(k));
    }
    Matrix eigenspace(sd.order(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t k = 0; k < columns.size(); ++k) {
      eigenspace.col(static_cast<Eigen::Index>(k)) = sd.vectors.col(columns[k]).real();
    }
    if (auto variety = variety_from_subspace(eigenspace, tol)) {
      out.push_back({variety->base, sd.eigenvalues[c].value.real()});
    }
  }
  return out;
}

namespace {

bool same_subspace(const Matrix& q1, const Matrix& q2) {
  if (q1.cols() != q2.cols()) return false;
  return (q1 * q1.transpose() - q2 * q2.transpose()).norm() <= 1e-8;
}

}  // namespace

std::vector<InvariantVariety> invariant_affine_varieties(const SystemMatrix& system, const SpectralDecomposition& sd,
                                                         std::size_t max_groups, const Tolerances& tol) {
  if (!sd.semisimple) throw NotSemisimple("invariant_affine_varieties: needs a full eigenbasis");
  const int order = sd.order();
  if (order != system.n() + 1) throw PreconditionError("invariant_affine_varieties: decomposition does not match");

  // Groups of clusters closed under conjugation.
  std::vector<std::vector<int>> groups;
  for (std::size_t c = 0; c < sd.eigenvalues.size(); ++c) {
    const Complex z = sd.eigenvalues[c].value;
    if (z.imag() < 0.0) continue;
    std::vector<int> group{static_cast<int>(c)};
    if (z.imag() > 0.0) {
      const int partner = sd.find(std::conj(z), tol.pairing);
      if (partner >= 0) group.push_back(partner);
    }
    groups.push_back(std::move(group));
  }

  std::vector<InvariantVariety> out;
  std::vector<Matrix> seen;
  const auto consider = [&](const std::vector<int>& columns) {
    CMatrix span(order, static_cast<Eigen::Index>(columns.size()));
    std::vector<Complex> values;
    for (std::size_t k = 0; k < columns.size(); ++k) {
      span.col(static_cast<Eigen::Index>(k)) = sd.vectors.col(columns[k]);
      values.push_back(sd.eigenvalues[static_cast<std::size_t>(sd.column_cluster[static_cast<std::size_t>(columns[k])])].value);
    }
    const Matrix basis = linalg::realify(span);
    if (basis.cols() == 0 || basis.cols() >= order) return;
    for (const Matrix& q : seen) {
      if (same_subspace(q, basis)) return;
    }
    seen.push_back(basis);
    if (auto variety = variety_from_subspace(basis, tol)) out.push_back({std::move(*variety), std::move(values)});
  };
  const auto columns_of_groups = [&](const std::vector<std::size_t>& chosen) {
    std::vector<int> columns;
    for (std::size_t k = 0; k < sd.column_cluster.size(); ++k) {
      for (std::size_t g : chosen) {
        const auto& members = groups[g];
        if (std::find(members.begin(), members.end(), sd.column_cluster[k]) != members.end()) {
          columns.push_back(static_cast<int>(k));
        }
      }
    }
    return columns;
  };

  const std::size_t limit = std::min(max_groups, groups.size() > 0 ? groups.size() - 1 : 0);
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t start, std::size_t size) {
    if (chosen.size() == size) {
      consider(columns_of_groups(chosen));
      return;
    }
    for (std::size_t g = start; g < groups.size(); ++g) {
      chosen.push_back(g);
      choose(g + 1, size);
      chosen.pop_back();
    }
  };
  for (std::size_t size = 1; size <= limit; ++size) choose(0, size);

  for (std::size_t drop = 0; drop < sd.column_cluster.size(); ++drop) {
    if (sd.eigenvalues[static_cast<std::size_t>(sd.column_cluster[drop])].value.imag() != 0.0) continue;
    std::vector<int> columns;
    for (std::size_t k = 0; k < sd.column_cluster.size(); ++k) {
      if (k != drop) columns.push_back(static_cast<int>(k));
    }
    consider(columns);
  }
  return out;
}

std::variant<AffineVariety, InU0> invariant_line_for_pair(const SystemMatrix& system, Complex lambda,
                                                          const CVector& v, Epsilon eps, const Tolerances& tol) {
  const Matrix& a = system.matrix();
  if (v.size() != a.rows()) throw PreconditionError("invariant_line_for_pair: eigenvector has the wrong size");
  if (std::abs(lambda.imag()) <= tol.pairing * std::max(1.0, std::abs(lambda))) {
    throw NotApplicable("invariant_line_for_pair: eigenvalue is real");
  }
  if (eps == Epsilon::plus && std::abs(std::abs(lambda) - 1.0) <= tol.unit_circle) {
    throw NotApplicable("invariant_line_for_pair: eigenvalue has unit modulus");
  }
  if (eps == Epsilon::minus && std::abs(lambda * lambda + 1.0) <= tol.pairing) {
    throw NotApplicable("invariant_line_for_pair: lambda^2 = -1");
  }
  const double defect = (a.cast<Complex>() * v - lambda * v).norm();
  if (defect > 1e-8 * system.norm() * v.norm()) {
    throw NotApplicable("invariant_line_for_pair: v is not an eigenvector for lambda");
  }
  Matrix span(a.rows(), 2);
  span.col(0) = 2.0 * v.real();   // v + conj v
  span.col(1) = -2.0 * v.imag();  // i (v - conj v)
  if (auto variety = variety_from_subspace(span, tol)) return *variety;
  return InU0{};
}

io::json quadric_to_json(const Quadric& q) {
  io::json out;
  out["M"] = io::to_json(q.matrix());
  const Signature& s = q.signature();
  out["signature"] = io::json::array({s.positive, s.negative, s.zero});
  return out;
}

Quadric quadric_from_json(const io::json& doc) {
  if (!doc.is_object() || !doc.contains("M")) throw ParseError("quadric JSON needs an \"M\" matrix");
  const Matrix m = io::matrix_from_json(doc.at("M"), "M");
  if (m.rows() != m.cols()) throw ParseError("M must be square");
  if ((m - m.transpose()).norm() > 1e-12 * std::max(1.0, m.norm())) throw ParseError("M must be symmetric");
  return Quadric(m);
}

io::json variety_to_json(const AffineVariety& v) {
  io::json out;
  out["base"] = io::to_json(v.base);
  out["directions"] = io::to_json(Matrix(v.directions.transpose()));
  return out;
}

}  // namespace quadrinv
