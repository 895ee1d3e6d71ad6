#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nspnp/mms.hpp"

namespace nspnp {

/// Parse failure; line is 0 when the problem is not tied to one line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct RunConfig {
  CaseTag tag = CaseTag::Example1;
  int nx = 0;
  int ny = 0;
  double tau = 0.0;
  std::vector<double> taus;
  double t_final = 0.0;
  double c0 = 0.0;
  SolverOptions concentration_solver{1e-10, 20000, true};
  SolverOptions poisson_solver{1e-10, 20000, true};
  SolverOptions velocity_solver{1e-10, 20000, true};
  DataTime data_time = DataTime::Next;
  ErrorMetric error_metric = ErrorMetric::Exact;
  VelocityBoundary velocity_boundary = VelocityBoundary::Exact;
  std::string out_dir;
  bool emit_svg = true;
  std::uint64_t seed = 20240917;

  /// Scheme parameters for one run at step `tau`.
  SchemeParams scheme_params(double step) const;
};

/// Flat `key = value` text; '#' starts a comment. Keys:
///   case (required)        example1 | example2 | example3
///   nx, ny                 cells per axis (default from the case's h)
///   h                      alternative to nx/ny: uniform cell size
///   tau                    step for `run` (default: first of taus)
///   taus                   comma separated; `convergence` needs strict halving
///   t_final, c0
///   tol                    all three solver tolerances at once
///   tol_concentration, tol_poisson, tol_velocity, max_iterations
///   data_time              next | current
///   error_reference        exact | interpolant
///   velocity_boundary      exact | noslip
///   out, svg, seed
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Defaults for a case without any file.
RunConfig default_config(CaseTag tag);

/// Cross-field checks; throws ConfigError.
void validate(const RunConfig& cfg);

}  // namespace nspnp
