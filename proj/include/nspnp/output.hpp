#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nspnp/mms.hpp"

namespace nspnp {

/// Each CSV starts with "# schema: <name>/<version>"; readers should skip '#'
/// lines and address columns by header name.
inline constexpr const char* kDiagnosticsSchema = "nspnp.diagnostics/1";
inline constexpr const char* kErrorsSchema = "nspnp.errors/1";
inline constexpr const char* kSummarySchema = "nspnp.summary/1";

/// Shortest round-trip decimal ("%.17g"); NaN renders as an empty field.
std::string format_number(double v);

std::string diagnostics_csv(const std::vector<DiagRecord>& trace);
std::string errors_csv(const ErrorReport& report);

/// Whole-run indicators derived from a trace.
struct RunSummary {
  std::string case_name;
  int nx = 0;
  int ny = 0;
  double h = 0.0;
  double tau = 0.0;
  double t_final = 0.0;
  double c0 = 0.0;
  int steps = 0;
  double mass_c1_initial = 0.0;
  double mass_c1_final = 0.0;
  double mass_c2_initial = 0.0;
  double mass_c2_final = 0.0;
  double mass_drift_c1 = 0.0;  // max_n |m^n - m^0| / |m^0| (absolute when m^0 = 0)
  double mass_drift_c2 = 0.0;
  double min_c1 = 0.0;  // over all steps
  double min_c2 = 0.0;
  double energy_h_initial = 0.0;
  double energy_h_final = 0.0;
  /// max_n (E^{n+1}_h - E^n_h + tau dissipation); <= 0 means the energy law held.
  double energy_law_excess = 0.0;
  /// max over n >= 1 of E_orig^{n+1} - E_orig^n.
  double original_energy_increase = 0.0;
  double energy_orig_final = 0.0;
  double max_xi_deviation = 0.0;
  double r_final = 0.0;
  int warnings = 0;
};

RunSummary summarize(const std::vector<DiagRecord>& trace);

std::string summary_csv(const std::vector<RunSummary>& rows);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal SVG line chart. log_y plots log10 of positive values only.
std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::vector<PlotSeries>& series, bool log_x = false,
                          bool log_y = false);

/// Writes `content` to `path`, creating parent directories. Throws on failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace nspnp
