#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "quadrinv/io.hpp"
#include "quadrinv/types.hpp"

// Command implementations behind the quadrinv executable. Each command
// returns its full output text so it can be exercised in-process.
namespace quadrinv::cli {

struct RunConfig {
  std::string command;
  std::string input;
  std::string matrix;                // verify: quadric JSON; orbit: optional quadric for residuals
  std::optional<Epsilon> eps;        // empty: try +1, then -1
  std::vector<Vector> x0;
  int steps = 100;
  Tolerances tol;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> seed_override;  // gen: replaces the seed in the spec
  std::size_t budget = 200;          // random combinations in the invertible-member search
  std::string format;                // json | csv; empty means the command default
  std::string output;
  int jobs = 1;
};

/// Exit codes.
enum ExitCode : int { ok = 0, domain_error = 1, parse_error = 2, singular = 3, numerical = 4 };

std::string cmd_analyze(const RunConfig& config);
std::string cmd_orbit(const RunConfig& config);
std::string cmd_quadric(const RunConfig& config);
std::string cmd_verify(const RunConfig& config);
std::string cmd_gen(const RunConfig& config);

/// Dispatches on config.command.
std::string run_command(const RunConfig& config);

/// Parses argv, runs the command, writes the output to `out` (or to
/// --output) and diagnostics to `err`. Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace quadrinv::cli
