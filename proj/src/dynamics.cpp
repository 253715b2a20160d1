#include "quadrinv/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "quadrinv/linalg.hpp"

namespace quadrinv {

std::string OrbitStatus::to_string() const {
  switch (kind) {
    case Kind::complete:
      return "complete(steps=" + std::to_string(step) + ")";
    case Kind::forbidden:
      return "forbidden(step=" + std::to_string(step) + ")";
    case Kind::periodic:
      return "periodic(period=" + std::to_string(period) + ", step=" + std::to_string(step) + ")";
    case Kind::fixed_point:
      return "fixed_point(step=" + std::to_string(step) + ")";
  }
  return "unknown";
}

namespace {

Vector unit_inf(const Vector& u) { return u / u.lpNorm<Eigen::Infinity>(); }

}  // namespace

Orbit iterate(const SystemMatrix& system, const Vector& x0, int steps, const Tolerances& tol,
              const IterateOptions& options) {
  if (x0.size() != system.n()) throw PreconditionError("iterate: x0 has the wrong dimension");
  if (steps < 0) throw PreconditionError("iterate: step count must be non-negative");
  const Matrix& a = system.matrix();

  Orbit orbit;
  orbit.x0 = x0;
  orbit.trace.push_back(unit_inf(lift(x0).u));
  if (auto x = try_project(HomogeneousVector{orbit.trace.back()}, tol.projection)) {
    orbit.points.push_back(*x);
  } else {
    orbit.status = {OrbitStatus::Kind::forbidden, 0, 0};
    return orbit;
  }

  int detected = 0;  // first p with u_p proportional to u_0
  int forbidden = 0;
  int last = steps;
  for (int k = 1; k <= last; ++k) {
    orbit.trace.push_back(unit_inf(a * orbit.trace.back()));
    const Vector& u = orbit.trace.back();
    if (forbidden > 0) continue;
    auto x = try_project(HomogeneousVector{u}, tol.projection);
    if (!x) {
      orbit.status = {OrbitStatus::Kind::forbidden, k, 0};
      if (options.stop_on_forbidden) return orbit;
      forbidden = k;
      continue;
    }
    orbit.points.push_back(*x);
    if (detected == 0 && linalg::line_distance(u, orbit.trace.front()) <= tol.period) {
      detected = k;
      if (options.stop_on_period) last = std::min(steps, 2 * k);
    }
  }
  if (forbidden > 0) return orbit;
  if (detected == 1) {
    orbit.status = {OrbitStatus::Kind::fixed_point, 1, 1};
  } else if (detected > 1) {
    orbit.status = {OrbitStatus::Kind::periodic, detected, detected};
  } else {
    orbit.status = {OrbitStatus::Kind::complete, steps, 0};
  }
  return orbit;
}

std::optional<int> detect_period(const Orbit& orbit, double tol_per) {
  const auto& t = orbit.trace;
  const int size = static_cast<int>(t.size());
  for (int p = 1; 2 * p + 1 <= size; ++p) {
    bool ok = true;
    for (int k = 0; k + p < size && ok; ++k) {
      ok = linalg::line_distance(t[static_cast<std::size_t>(k + p)], t[static_cast<std::size_t>(k)]) <= tol_per;
    }
    if (ok) return p;
  }
  return std::nullopt;
}

OrbitResiduals residuals_along_orbit(const Orbit& orbit, const Quadric& q) {
  OrbitResiduals out;
  const Matrix& m = q.matrix();
  for (const Vector& u : orbit.trace) {
    const double r = q.norm() == 0.0 ? 0.0 : std::abs(u.dot(m * u)) / (q.norm() * u.squaredNorm());
    out.per_step.push_back(r);
    out.max = std::max(out.max, r);
  }
  return out;
}

void write_orbit_csv(std::ostream& out, const Orbit& orbit, const Quadric* q) {
  const Eigen::Index n = orbit.x0.size();
  out << "step";
  for (Eigen::Index i = 0; i < n; ++i) out << ",x_" << (i + 1);
  out << ",pr_scaled";
  if (q) out << ",residual";
  out << '\n';
  const OrbitResiduals res = q ? residuals_along_orbit(orbit, *q) : OrbitResiduals{};
  for (std::size_t k = 0; k < orbit.trace.size(); ++k) {
    out << k;
    for (Eigen::Index i = 0; i < n; ++i) {
      out << ',';
      if (k < orbit.points.size()) out << io::format_double(orbit.points[k](i));
    }
    const Vector& u = orbit.trace[k];
    out << ',' << io::format_double(u(u.size() - 1));
    if (q) out << ',' << io::format_double(res.per_step[k]);
    out << '\n';
  }
  out << "# status: " << orbit.status.to_string() << '\n';
}

io::json orbit_to_json(const Orbit& orbit, const Quadric* q) {
  io::json out;
  out["x0"] = io::to_json(orbit.x0);
  out["status"] = orbit.status.to_string();
  io::json points = io::json::array();
  for (const Vector& x : orbit.points) points.push_back(io::to_json(x));
  out["points"] = std::move(points);
  io::json pr = io::json::array();
  for (const Vector& u : orbit.trace) pr.push_back(u(u.size() - 1));
  out["pr_scaled"] = std::move(pr);
  if (auto p = detect_period(orbit)) {
    out["period"] = *p;
  } else {
    out["period"] = nullptr;
  }
  if (q) {
    const OrbitResiduals res = residuals_along_orbit(orbit, *q);
    out["max_residual"] = res.max;
  }
  return out;
}

}  // namespace quadrinv
