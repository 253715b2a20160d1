#include "quadrinv/construct.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "quadrinv/linalg.hpp"

namespace quadrinv {

namespace {

// Below this magnitude alpha_i1 is considered to leave too little headroom.
constexpr double kAlphaHeadroom = 1e-2;
// Largest relative change accepted from the projection onto C_eps(A).
constexpr double kPolishLimit = 1e-6;

}  // namespace

EigenCoordinates eigencoordinates(const OrderedDiagonalization& od, const Vector& x0, const Tolerances& tol) {
  if (x0.size() + 1 != od.order()) throw PreconditionError("eigencoordinates: x0 has the wrong dimension");
  EigenCoordinates ec;
  ec.j = od.j;
  ec.coords = od.p * lift(x0).u.cast<Complex>();
  ec.c.resize(od.block_count());
  for (int i = 0; i < od.j; ++i) ec.c(i) = 2.0 * ec.coords(2 * i) * ec.coords(2 * i + 1);
  for (int i = od.j; i < od.block_count(); ++i) {
    const Complex a = ec.coords(od.j + i);
    ec.c(i) = a * a;
  }
  const double threshold = tol.support * ec.coords.squaredNorm();
  for (Eigen::Index i = 0; i < ec.c.size(); ++i) {
    const double size = std::abs(ec.c(i));
    if (size > threshold) ++ec.nonzero_count;
    if (size > 1e-2 * threshold && size <= 1e2 * threshold) ec.borderline = true;
  }
  return ec;
}

CVector choose_alphas(const EigenCoordinates& ec, const Tolerances& tol) {
  if (ec.nonzero_count < 2) throw InsufficientSupport("fewer than two non-zero eigen-coordinates");
  const Eigen::Index count = ec.c.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index l, Eigen::Index r) { return std::abs(ec.c(l)) > std::abs(ec.c(r)); });
  const Eigen::Index i1 = order[0];
  const Eigen::Index i2 = order[1];

  const auto solve = [&](CVector alpha) {
    Complex sum = 0.0;
    for (Eigen::Index i = 0; i < count; ++i) {
      if (i != i1) sum += alpha(i) * ec.c(i);
    }
    alpha(i1) = -sum / ec.c(i1);
    return alpha;
  };
  CVector alpha = solve(CVector::Ones(count));
  if (std::abs(alpha(i1)) <= std::max(tol.support, kAlphaHeadroom)) {
    CVector other = CVector::Ones(count);
    other(i2) = 2.0;
    other = solve(other);
    if (std::abs(other(i1)) > std::abs(alpha(i1))) alpha = other;
  }
  return alpha;
}

InvariantForm build_invariant_form(const Matrix& a, const OrderedDiagonalization& od, const EigenCoordinates& ec,
                                   const CVector& alphas, const Vector& x0, std::uint64_t seed,
                                   const Tolerances& tol) {
  const int order = od.order();
  if (alphas.size() != od.block_count()) throw PreconditionError("build_invariant_form: wrong number of weights");
  if (a.rows() != order) throw PreconditionError("build_invariant_form: matrix does not match the diagonalization");
  (void)ec;

  CMatrix s = CMatrix::Zero(order, order);
  for (int i = 0; i < od.j; ++i) s(2 * i, 2 * i + 1) = s(2 * i + 1, 2 * i) = alphas(i);
  for (int i = od.j; i < od.block_count(); ++i) s(od.j + i, od.j + i) = alphas(i);
  const CMatrix r = od.p.transpose() * s * od.p;

  InvariantForm form;
  form.real_part = linalg::symmetric_part(r.real());
  form.imag_part = linalg::symmetric_part(r.imag());

  const std::array<double, 9> grid{0.0, 1.0, -1.0, 0.5, -0.5, 2.0, -2.0, 5.0, -5.0};
  std::array<double, 9> ratio{};
  double best = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    ratio[k] = linalg::inverse_condition(form.real_part + grid[k] * form.imag_part);
    best = std::max(best, ratio[k]);
  }
  std::optional<double> mu0;
  if (best > tol.singular) {
    for (std::size_t k = 0; k < grid.size() && !mu0; ++k) {
      if (ratio[k] >= 0.5 * best) mu0 = grid[k];
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> draw(-10.0, 10.0);
    for (int t = 0; t < 32 && !mu0; ++t) {
      const double candidate = draw(rng);
      if (linalg::inverse_condition(form.real_part + candidate * form.imag_part) > tol.singular) mu0 = candidate;
    }
  }
  if (!mu0) throw NoInvertibleCombination("no invertible combination Re R + mu0 Im R found");

  form.mu0 = *mu0;
  form.unpolished = form.real_part + form.mu0 * form.imag_part;
  form.m = form.unpolished;
  form.congruence_residual = congruence_residual(a, form.m, value(od.eps));
  const Vector u = lift(x0).u;
  const auto point_residual = [&](const Matrix& m) {
    return std::abs(u.dot(m * u)) / (linalg::spectral_norm(m) * u.squaredNorm());
  };
  form.point_residual = point_residual(form.m);

  // Eigenbasis rounding is amplified by ||A||^2 in the residual when P is
  // ill-conditioned; project onto the numerical solution space to remove it.
  const SymmetricSolutionSpace space = solve_congruence(a, value(od.eps), tol);
  Matrix polished = Matrix::Zero(order, order);
  for (const Matrix& b : space.basis) polished += (b.array() * form.m.array()).sum() * b;
  const double moved = (polished - form.m).norm() / form.m.norm();
  if (moved <= kPolishLimit && linalg::inverse_condition(polished) > tol.singular) {
    const double residual = congruence_residual(a, polished, value(od.eps));
    if (residual < form.congruence_residual && point_residual(polished) <= std::max(form.point_residual, tol.membership)) {
      form.m = polished;
      form.congruence_residual = residual;
      form.point_residual = point_residual(polished);
      form.polished = true;
    }
  }
  return form;
}

Matrix minimal_invariant_subspace(const SpectralDecomposition& sd, const Vector& x0, const Tolerances& tol) {
  if (!sd.semisimple) throw NotSemisimple("minimal_invariant_subspace: needs a full eigenbasis");
  const CVector u = lift(x0).u.cast<Complex>();
  const CVector y = sd.vectors.fullPivLu().solve(u);
  const double threshold = std::sqrt(tol.support) * u.norm();

  std::vector<CVector> parts;
  for (std::size_t c = 0; c < sd.eigenvalues.size(); ++c) {
    CVector part = CVector::Zero(u.size());
    for (std::size_t k = 0; k < sd.column_cluster.size(); ++k) {
      if (sd.column_cluster[k] == static_cast<int>(c)) {
        part += y(static_cast<Eigen::Index>(k)) * sd.vectors.col(static_cast<Eigen::Index>(k));
      }
    }
    if (part.norm() > threshold) parts.push_back(std::move(part));
  }
  CMatrix span(u.size(), static_cast<Eigen::Index>(parts.size()));
  for (std::size_t k = 0; k < parts.size(); ++k) span.col(static_cast<Eigen::Index>(k)) = parts[k];
  return linalg::realify(span);
}

ThroughPoint quadric_through_point(const SystemMatrix& system, const Vector& x0, Epsilon eps, std::uint64_t seed,
                                   const Tolerances& tol) {
  if (x0.size() != system.n()) throw PreconditionError("quadric_through_point: x0 has the wrong dimension");
  const SystemMatrix normalized = normalize(system, tol);
  if (!try_evaluate_map(normalized, x0, tol.projection)) {
    throw ForbiddenPoint("x0 lies on the principal forbidden hyperplane");
  }
  const SpectralDecomposition sd = decompose(normalized, tol);
  if (!sd.semisimple) throw NotSemisimple("quadric_through_point: A is not diagonalizable");
  const OrderedDiagonalization od = ordered_diagonalization(sd, eps, tol);
  EigenCoordinates ec = eigencoordinates(od, x0, tol);

  std::vector<std::string> warnings;
  if (ec.borderline) warnings.emplace_back("an eigen-coordinate product is close to the support threshold");
  if (ec.nonzero_count >= 2) {
    try {
      const CVector alphas = choose_alphas(ec, tol);
      const InvariantForm form = build_invariant_form(normalized.matrix(), od, ec, alphas, x0, seed, tol);
      return {Quadric(form.m, tol.singular), eps, std::move(ec), std::move(warnings), form.unpolished};
    } catch (const NumericalFailure& e) {
      if (!ec.borderline) throw;
      warnings.emplace_back(std::string("quadric construction failed, using the affine variety: ") + e.what());
    }
  }
  auto variety = variety_from_subspace(minimal_invariant_subspace(sd, x0, tol), tol);
  if (!variety) throw NumericalFailure("invariant subspace through l(x0) lies in U_0");
  return {std::move(*variety), eps, std::move(ec), std::move(warnings), Matrix()};
}

std::vector<Quadric> all_quadrics_through_point(const SymmetricSolutionSpace& space, const Vector& x0,
                                                const Tolerances& tol) {
  std::vector<Quadric> out;
  if (space.dim() == 0) return out;
  if (x0.size() + 1 != space.order()) throw PreconditionError("all_quadrics_through_point: x0 has the wrong dimension");
  const Vector u = lift(x0).u;
  const auto d = static_cast<Eigen::Index>(space.dim());
  Vector g(d);
  for (Eigen::Index i = 0; i < d; ++i) g(i) = u.dot(space.basis[static_cast<std::size_t>(i)] * u);

  if (g.norm() <= tol.membership * u.squaredNorm()) {
    for (const Matrix& m : space.basis) out.emplace_back(m, tol.singular);
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(Matrix(g), Eigen::ComputeFullU);
  Matrix coefficients = svd.matrixU().rightCols(d - 1);
  linalg::canonicalize_sign(coefficients);
  for (Eigen::Index k = 0; k < coefficients.cols(); ++k) {
    Matrix m = Matrix::Zero(space.order(), space.order());
    for (Eigen::Index i = 0; i < d; ++i) m += coefficients(i, k) * space.basis[static_cast<std::size_t>(i)];
    out.emplace_back(m, tol.singular);
  }
  return out;
}

double projection_defect(const Matrix& m, const std::vector<Quadric>& basis) {
  const double scale = m.norm();
  if (scale == 0.0) return 0.0;
  Matrix rest = m;
  for (const Quadric& q : basis) rest -= (q.matrix().array() * m.array()).sum() * q.matrix();
  return rest.norm() / scale;
}

io::json through_point_to_json(const ThroughPoint& result) {
  io::json out;
  if (const auto* q = std::get_if<Quadric>(&result.object)) {
    out["kind"] = "quadric";
    out["M"] = io::to_json(q->matrix());
    out["mu"] = static_cast<int>(result.eps);
    const Signature& s = q->signature();
    out["signature"] = io::json::array({s.positive, s.negative, s.zero});
  } else {
    const auto& v = std::get<AffineVariety>(result.object);
    out["kind"] = "variety";
    const io::json body = variety_to_json(v);
    out["base"] = body["base"];
    out["directions"] = body["directions"];
  }
  out["nonzero_count"] = result.coordinates.nonzero_count;
  io::json warnings = io::json::array();
  for (const auto& w : result.warnings) warnings.push_back(w);
  out["warnings"] = std::move(warnings);
  return out;
}

}  // namespace quadrinv
