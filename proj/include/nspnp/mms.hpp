#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nspnp/scheme.hpp"

namespace nspnp {

enum class CaseTag { Example1, Example2, Example3 };

CaseTag parse_case_tag(const std::string& name);
std::string to_string(CaseTag tag);

enum class ExactField { C1, C2, Phi, Ux, Uy, P };

/// A benchmark configuration: domain, defaults, initial data and (for the
/// manufactured cases) exact fields and the matching source terms.
struct ManufacturedCase {
  CaseTag tag = CaseTag::Example1;
  Rect bounds;
  double c0 = 1.0;
  int default_cells = 1;  // per axis
  double default_t_final = 1.0;
  std::vector<double> default_taus;

  bool has_exact = false;
  ScalarExact c1;
  ScalarExact c2;
  ScalarExact phi;
  ScalarExact p;
  VectorExact u;
  SourceTerms sources;

  ScalarFunction initial_c1;
  ScalarFunction initial_c2;
  VectorFunction initial_u;
  ScalarFunction initial_p;
};

ManufacturedCase make_case(CaseTag tag);

/// Closed-form exact value; throws std::invalid_argument for Example3.
double exact_eval(const ManufacturedCase& c, ExactField field, double x, double y, double t);

struct SourceValues {
  double f_c1 = 0.0;
  double f_c2 = 0.0;
  Vec2 f_u;
};

/// Residuals of the exact fields in the model equations (zero for Example3).
SourceValues source_eval(const ManufacturedCase& c, double x, double y, double t);

/// Error columns in table order.
inline constexpr std::array<const char*, 9> kErrorColumns = {
    "c1_L2", "c1_H1", "c2_L2", "c2_H1", "phi_L2", "phi_H1", "u_L2", "u_H1", "p_L2"};

struct ErrorRow {
  double tau = 0.0;
  double h = 0.0;
  std::array<double, 9> errors{};
  /// log2(e(2 tau) / e(tau)); NaN on the first row.
  std::array<double, 9> rates{};
};

struct ErrorReport {
  std::vector<ErrorRow> rows;
};

/// Exact: e = u_h - u measured with quadrature. Interpolant: e = u_h - I_h u,
/// the nodal interpolant on the same space (no interpolation error).
enum class ErrorMetric { Exact, Interpolant };

ErrorMetric parse_error_metric(const std::string& name);
std::string to_string(ErrorMetric metric);

enum class VelocityBoundary { Exact, NoSlip };

struct RunOptions {
  int cells = 0;  // per axis; 0 = case default
  VelocityBoundary velocity_boundary = VelocityBoundary::Exact;
  ErrorMetric error_metric = ErrorMetric::Exact;
  /// Called after each step; return false to stop early.
  std::function<bool(const StepResult&)> on_step;
};

struct RunResult {
  State final_state;
  std::vector<DiagRecord> trace;  // includes the initial record
  std::optional<ErrorRow> errors;
  std::vector<std::string> warnings;
};

/// Errors of `s` against the exact fields at time s.time.
ErrorRow measure_errors(const ManufacturedCase& c, const State& s, double tau,
                        ErrorMetric metric = ErrorMetric::Exact);

/// Time loop to params.t_final. Sources are enabled iff the case has them.
RunResult run_case(const ManufacturedCase& c, SchemeParams params, const RunOptions& options = {});

/// One run per tau (strictly halving), rates between consecutive rows.
/// `on_run` sees each finished run, e.g. to keep its trace.
ErrorReport convergence_study(const ManufacturedCase& c, const SchemeParams& params,
                              const std::vector<double>& taus, const RunOptions& options = {},
                              const std::function<void(const RunResult&)>& on_run = {});

/// Fill rates for an already measured set of rows.
void compute_rates(ErrorReport& report);

}  // namespace nspnp
