#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "quadrinv/geometry.hpp"
#include "quadrinv/homogeneous.hpp"
#include "quadrinv/io.hpp"
#include "quadrinv/types.hpp"

namespace quadrinv {

/// How an orbit computation ended.
struct OrbitStatus {
  enum class Kind { complete, forbidden, periodic, fixed_point };

  Kind kind = Kind::complete;
  int step = 0;    // complete: K; forbidden: first undefined iterate; otherwise step of detection
  int period = 0;  // periodic only

  std::string to_string() const;
};

struct Orbit {
  Vector x0;
  std::vector<Vector> points;  // defined iterates x_0, x_1, ...
  std::vector<Vector> trace;   // u_k proportional to A^k l(x0), unit infinity norm
  OrbitStatus status;
};

struct IterateOptions {
  /// After detecting u_p proportional to u_0, iterate only up to step 2p so
  /// that detect_period has enough points.
  bool stop_on_period = true;
  /// When false the homogeneous trace is continued for all steps after a
  /// forbidden crossing; points stop at the crossing either way.
  bool stop_on_forbidden = true;
};

/// Iterates u_{k+1} = A u_k / ||A u_k||_inf for up to `steps` steps. The
/// orbit is Forbidden(k) at the first k with |pr(u_k)| <= tol.projection;
/// Forbidden(0) only when l(x0) itself falls inside that band.
Orbit iterate(const SystemMatrix& system, const Vector& x0, int steps, const Tolerances& tol = {},
              const IterateOptions& options = {});

/// Smallest p such that u_{k+p} and u_k span the same line (within tol_per)
/// for every available k, considering only p with at least 2p+1 trace entries.
std::optional<int> detect_period(const Orbit& orbit, double tol_per = Tolerances{}.period);

struct OrbitResiduals {
  double max = 0.0;
  std::vector<double> per_step;
};

/// |u_k^T M u_k| / (||M||_2 ||u_k||^2) along the homogeneous trace.
OrbitResiduals residuals_along_orbit(const Orbit& orbit, const Quadric& q);

/// CSV with columns step, x_1..x_n, pr_scaled and, when `q` is given,
/// residual. A forbidden step has empty x columns. Ends with a
/// "# status: ..." line.
void write_orbit_csv(std::ostream& out, const Orbit& orbit, const Quadric* q = nullptr);

io::json orbit_to_json(const Orbit& orbit, const Quadric* q = nullptr);

}  // namespace quadrinv
