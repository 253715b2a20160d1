#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "quadrinv/congruence.hpp"
#include "quadrinv/construct.hpp"
#include "quadrinv/dynamics.hpp"
#include "quadrinv/genlab.hpp"
#include "quadrinv/geometry.hpp"
#include "quadrinv/homogeneous.hpp"
#include "quadrinv/linalg.hpp"
#include "quadrinv/spectral.hpp"

namespace quadrinv::cli {

namespace {

using io::json;

SystemMatrix load_system(const RunConfig& config) {
  if (config.input.empty()) throw ParseError("--input is required");
  return system_from_json(io::read_json_file(config.input), config.tol);
}

std::vector<Epsilon> epsilon_order(const RunConfig& config) {
  if (config.eps) return {*config.eps};
  return {Epsilon::plus, Epsilon::minus};
}

json epsilon_list(const std::vector<Epsilon>& order) {
  json out = json::array();
  for (Epsilon e : order) out.push_back(static_cast<int>(e));
  return out;
}

std::string render(const json& doc) { return io::dump(doc) + "\n"; }

// Runs task(i) for i in [0, count) on up to `jobs` threads. Results are
// stored by index, so output order does not depend on scheduling.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) {
        try {
          task(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

json cluster_to_json(const EigenCluster& c) {
  return {{"value", io::to_json(c.value)}, {"multiplicity", c.multiplicity}, {"geometric", c.geometric}};
}

json member_to_json(const MemberSearch& search) {
  return std::visit(
      [](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, InvertibleMember>) {
          const Quadric q(r.m);
          const Signature& s = q.signature();
          return {{"kind", "found"},
                  {"M", io::to_json(r.m)},
                  {"coefficients", io::to_json(r.coefficients)},
                  {"inverse_condition", linalg::inverse_condition(r.m)},
                  {"signature", json::array({s.positive, s.negative, s.zero})}};
        } else if constexpr (std::is_same_v<T, NoneFound>) {
          return {{"kind", "none_found"},
                  {"samples", r.samples},
                  {"best_inverse_condition", r.best_inverse_condition}};
        } else {
          return {{"kind", "certified_singular"}, {"kernel", io::to_json(r.kernel)}};
        }
      },
      search);
}

json congruence_report(const SpectralDecomposition& sd, const Matrix& a, Epsilon eps, const RunConfig& config,
                       bool& has_member) {
  json out;
  out["epsilon"] = static_cast<int>(eps);
  const bool similar = sd.semisimple && (eps == Epsilon::plus ? sd.closed_plus : sd.closed_minus);
  out["similar"] = similar;
  if (similar) {
    try {
      const SigmaSet sigma = sigma_epsilon(sd, eps, config.tol);
      json list = json::array();
      for (const auto& c : sigma.sigma) list.push_back(cluster_to_json(c));
      out["sigma"] = std::move(list);
      out["r"] = sigma.r;
      out["s"] = sigma.s;
    } catch (const PairingAmbiguity& e) {
      out["sigma"] = nullptr;
      out["sigma_note"] = e.what();
    }
  } else {
    out["sigma"] = nullptr;
  }
  try {
    const PredictedDimension predicted = predicted_dimension(sd, eps, config.tol);
    out["predicted_dim"] = predicted.value;
    out["parity_forced_zero"] = predicted.parity_forced_zero;
  } catch (const NotApplicable& e) {
    out["predicted_dim"] = nullptr;
    out["predicted_note"] = e.what();
  }

  const SymmetricSolutionSpace space = solve_congruence(a, value(eps), config.tol);
  out["computed_dim"] = space.dim();
  out["max_residual"] = space.max_residual;
  json basis = json::array();
  for (const Matrix& m : space.basis) basis.push_back(io::to_json(m));
  out["basis"] = std::move(basis);
  if (space.dim() == 0) {
    out["invertible_member"] = {{"kind", "empty"}};
    has_member = false;
  } else {
    const MemberSearch search = invertible_member(space, config.budget, config.seed, config.tol);
    has_member = std::holds_alternative<InvertibleMember>(search);
    out["invertible_member"] = member_to_json(search);
  }
  return out;
}

Epsilon choose_epsilon(const SpectralDecomposition& sd, const std::vector<Epsilon>& order) {
  if (!sd.semisimple) throw NotSemisimple("A is not diagonalizable; no quadric construction applies");
  for (Epsilon e : order) {
    if (e == Epsilon::plus ? sd.closed_plus : sd.closed_minus) return e;
  }
  throw NotApplicable("A is not similar to eps * A^-1 for the requested eps");
}

Quadric load_quadric(const std::string& path) {
  const json doc = io::read_json_file(path);
  if (doc.is_array()) return Quadric(io::matrix_from_json(doc, "M"));
  return quadric_from_json(doc);
}

void require_x0(const RunConfig& config, const SystemMatrix& system) {
  if (config.x0.empty()) throw ParseError("at least one --x0 is required");
  for (const Vector& x : config.x0) {
    if (x.size() != system.n()) {
      throw ParseError("--x0 has " + std::to_string(x.size()) + " coordinates, expected " +
                       std::to_string(system.n()));
    }
  }
}

}  // namespace

std::string cmd_analyze(const RunConfig& config) {
  const SystemMatrix system = load_system(config);
  const SystemMatrix normalized = normalize(system, config.tol);
  const SpectralDecomposition sd = decompose(normalized, config.tol);

  json report;
  report["n"] = system.n();
  report["determinant"] = system.determinant();
  report["normalization_scale"] = normalization_scale(system);
  json spectrum = json::array();
  for (const auto& c : sd.eigenvalues) spectrum.push_back(cluster_to_json(c));
  report["spectrum"] = std::move(spectrum);
  report["semisimple"] = sd.semisimple;
  report["eigenvector_condition"] = sd.condition;
  report["closed_plus"] = sd.closed_plus;
  report["closed_minus"] = sd.closed_minus;

  const std::vector<Epsilon> order = epsilon_order(config);
  report["epsilon_order"] = epsilon_list(order);
  json congruence = json::array();
  json detected = nullptr;
  for (Epsilon e : order) {
    bool has_member = false;
    congruence.push_back(congruence_report(sd, normalized.matrix(), e, config, has_member));
    if (has_member && detected.is_null()) detected = static_cast<int>(e);
  }
  report["epsilon_detected"] = detected;
  report["congruence"] = std::move(congruence);

  json fixed = json::array();
  for (const FixedPoint& p : fixed_points(normalized, sd, config.tol)) {
    fixed.push_back({{"x", io::to_json(p.x)}, {"lambda", p.lambda}});
  }
  report["fixed_points"] = std::move(fixed);
  json varieties = json::array();
  if (sd.semisimple) {
    for (const InvariantVariety& v : invariant_affine_varieties(normalized, sd, 3, config.tol)) {
      json item = variety_to_json(v.variety);
      json values = json::array();
      for (Complex z : v.eigenvalues) values.push_back(io::to_json(z));
      item["eigenvalues"] = std::move(values);
      varieties.push_back(std::move(item));
    }
  }
  report["invariant_varieties"] = std::move(varieties);
  return render(report);
}

std::string cmd_orbit(const RunConfig& config) {
  const SystemMatrix system = load_system(config);
  require_x0(config, system);
  if (config.steps < 1) throw ParseError("--steps must be at least 1");
  std::optional<Quadric> quadric;
  if (!config.matrix.empty()) quadric = load_quadric(config.matrix);
  if (quadric && quadric->matrix().rows() != system.n() + 1) throw ParseError("quadric order does not match the system");

  std::vector<Orbit> orbits(config.x0.size());
  parallel_for(orbits.size(), config.jobs,
               [&](std::size_t i) { orbits[i] = iterate(system, config.x0[i], config.steps, config.tol); });

  const Quadric* q = quadric ? &*quadric : nullptr;
  if (config.format == "json") {
    json doc;
    json list = json::array();
    for (const Orbit& o : orbits) list.push_back(orbit_to_json(o, q));
    doc["orbits"] = std::move(list);
    return render(doc);
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    if (orbits.size() > 1) {
      out << "# orbit " << i << " x0:";
      for (Eigen::Index k = 0; k < orbits[i].x0.size(); ++k) out << ' ' << io::format_double(orbits[i].x0(k));
      out << '\n';
    }
    write_orbit_csv(out, orbits[i], q);
  }
  return out.str();
}

std::string cmd_quadric(const RunConfig& config) {
  const SystemMatrix system = load_system(config);
  require_x0(config, system);
  const std::vector<Epsilon> order = epsilon_order(config);
  const SystemMatrix normalized = normalize(system, config.tol);
  const Epsilon eps = choose_epsilon(decompose(normalized, config.tol), order);

  std::vector<json> results(config.x0.size());
  parallel_for(results.size(), config.jobs, [&](std::size_t i) {
    const Vector& x0 = config.x0[i];
    const ThroughPoint tp = quadric_through_point(system, x0, eps, config.seed, config.tol);
    json item;
    item["x0"] = io::to_json(x0);
    const json body = through_point_to_json(tp);
    for (const auto& [key, val] : body.items()) item[key] = val;
    const Orbit orbit = iterate(system, x0, config.steps, config.tol, {false, false});
    double worst = 0.0;
    if (const auto* q = std::get_if<Quadric>(&tp.object)) {
      worst = residuals_along_orbit(orbit, *q).max;
    } else {
      const auto& v = std::get<AffineVariety>(tp.object);
      for (const Vector& x : orbit.points) worst = std::max(worst, v.distance(x) / (1.0 + x.norm()));
    }
    item["orbit_check"] = {{"steps", static_cast<int>(orbit.trace.size()) - 1},
                           {"status", orbit.status.to_string()},
                           {"max_residual", worst}};
    results[i] = std::move(item);
  });

  json doc;
  doc["epsilon_order"] = epsilon_list(order);
  doc["epsilon"] = static_cast<int>(eps);
  doc["results"] = json(results);
  return render(doc);
}

std::string cmd_verify(const RunConfig& config) {
  const SystemMatrix system = load_system(config);
  if (config.matrix.empty()) throw ParseError("--matrix is required for verify");
  const Quadric q = load_quadric(config.matrix);
  if (q.matrix().rows() != system.n() + 1) throw ParseError("quadric order does not match the system");
  const InvarianceReport report = verify_invariance(q, system, config.tol);

  json doc;
  doc["invariant"] = report.mu.has_value();
  if (report.mu) {
    doc["mu"] = *report.mu;
    const double scale = normalization_scale(system);
    doc["mu_normalized"] = *report.mu * scale * scale;
  } else {
    doc["mu"] = nullptr;
    doc["mu_normalized"] = nullptr;
  }
  doc["residual"] = report.residual;
  const Signature& s = q.signature();
  doc["signature"] = json::array({s.positive, s.negative, s.zero});
  doc["degenerate"] = report.degenerate;
  doc["low_rank"] = report.low_rank;
  doc["definite"] = report.definite;
  doc["geometric_equivalence"] = report.geometric_equivalence();
  return render(doc);
}

std::string cmd_gen(const RunConfig& config) {
  if (config.input.empty()) throw ParseError("--input (instance spec JSON) is required");
  genlab::InstanceSpec spec = genlab::spec_from_json(io::read_json_file(config.input));
  if (config.seed_override) spec.seed = *config.seed_override;
  return render(genlab::instance_to_json(genlab::generate(spec)));
}

std::string run_command(const RunConfig& config) {
  if (config.command == "analyze") return cmd_analyze(config);
  if (config.command == "orbit") return cmd_orbit(config);
  if (config.command == "quadric") return cmd_quadric(config);
  if (config.command == "verify") return cmd_verify(config);
  if (config.command == "gen") return cmd_gen(config);
  throw ParseError("unknown command: " + config.command);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::string epsilon = "auto";
  std::vector<std::string> x0_text;
  std::uint64_t seed = 0;

  CLI::App app{"Invariant quadrics and affine varieties of rational difference systems"};
  app.require_subcommand(1);
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input,-i", config.input, "System JSON (instance spec JSON for gen)");
    sub->add_option("--output,-o", config.output, "Write the result here instead of stdout");
    sub->add_option("--seed", seed, "Seed for randomized steps");
    sub->add_option("--epsilon", epsilon, "+1, -1 or auto (tries +1 then -1)")
        ->check(CLI::IsMember({"auto", "1", "+1", "-1"}));
    sub->add_option("--format", config.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--jobs,-j", config.jobs, "Worker threads for batches of --x0")->check(CLI::PositiveNumber);
    sub->add_option("--budget", config.budget, "Random combinations tried in the invertible-member search");
    sub->add_option("--tol-projection", config.tol.projection)->check(CLI::PositiveNumber);
    sub->add_option("--tol-singular", config.tol.singular)->check(CLI::PositiveNumber);
    sub->add_option("--tol-determinant", config.tol.determinant)->check(CLI::PositiveNumber);
    sub->add_option("--tol-cluster", config.tol.cluster)->check(CLI::PositiveNumber);
    sub->add_option("--tol-rank", config.tol.rank)->check(CLI::PositiveNumber);
    sub->add_option("--tol-pairing", config.tol.pairing)->check(CLI::PositiveNumber);
    sub->add_option("--tol-unit-circle", config.tol.unit_circle)->check(CLI::PositiveNumber);
    sub->add_option("--tol-nullspace", config.tol.nullspace)->check(CLI::PositiveNumber);
    sub->add_option("--tol-membership", config.tol.membership)->check(CLI::PositiveNumber);
    sub->add_option("--tol-support", config.tol.support)->check(CLI::PositiveNumber);
    sub->add_option("--tol-period", config.tol.period)->check(CLI::PositiveNumber);
    sub->add_option("--max-eigvec-condition", config.tol.max_eigvec_condition)->check(CLI::PositiveNumber);
  };
  const auto add_points = [&](CLI::App* sub) {
    sub->add_option("--x0", x0_text, "Initial point as comma-separated coordinates (repeatable)");
    sub->add_option("--steps,-k", config.steps, "Orbit steps")->check(CLI::PositiveNumber);
  };

  CLI::App* analyze = app.add_subcommand("analyze", "Spectrum, solution spaces, fixed points, invariant varieties");
  add_common(analyze);
  CLI::App* orbit = app.add_subcommand("orbit", "Orbit trace (CSV by default)");
  add_common(orbit);
  add_points(orbit);
  orbit->add_option("--matrix,-m", config.matrix, "Quadric JSON; adds a residual column");
  CLI::App* quadric = app.add_subcommand("quadric", "Invariant quadric or affine variety through each --x0");
  add_common(quadric);
  add_points(quadric);
  CLI::App* verify = app.add_subcommand("verify", "Check A^T M A = mu M for a given M");
  add_common(verify);
  verify->add_option("--matrix,-m", config.matrix, "Quadric JSON {\"M\": [[...]]} or a bare matrix")->required();
  CLI::App* gen = app.add_subcommand("gen", "Generate an instance from a spec");
  add_common(gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ExitCode::ok : ExitCode::parse_error;
  }

  try {
    for (CLI::App* sub : app.get_subcommands()) config.command = sub->get_name();
    CLI::App* active = app.get_subcommands().front();
    config.seed = seed;
    if (active->count("--seed") > 0) config.seed_override = seed;
    if (epsilon == "1" || epsilon == "+1") config.eps = Epsilon::plus;
    if (epsilon == "-1") config.eps = Epsilon::minus;
    for (const auto& text : x0_text) config.x0.push_back(io::parse_vector(text));
    if (config.format.empty()) config.format = config.command == "orbit" ? "csv" : "json";
    if (config.format == "csv" && config.command != "orbit") throw ParseError("csv output is only available for orbit");

    const std::string result = run_command(config);
    if (config.output.empty()) {
      out << result;
    } else {
      std::ofstream file(config.output, std::ios::binary);
      if (!file) throw ParseError("cannot write " + config.output);
      file << result;
    }
    return ExitCode::ok;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::parse_error;
  } catch (const SingularMatrix& e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::singular;
  } catch (const NumericalFailure& e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::numerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::domain_error;
  }
}

}  // namespace quadrinv::cli
