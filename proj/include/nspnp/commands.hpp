#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nspnp/config.hpp"
#include "nspnp/output.hpp"
#include "nspnp/selfcheck.hpp"

namespace nspnp {

struct CommandOutput {
  std::vector<std::string> files;  // written, in order
  std::vector<std::string> warnings;
  std::optional<ErrorReport> errors;
  std::vector<RunSummary> summaries;
  std::vector<DiagRecord> trace;  // of the run, or of the smallest tau
};

/// Fixed-width error/rate table for terminals.
std::string format_error_table(const ErrorReport& report);

/// One run at cfg.tau: diagnostics.csv, summary.csv, errors.csv (cases with an
/// exact solution), warnings.log when non-empty, SVG traces when enabled.
/// Progress lines go to `log` when non-null.
CommandOutput cmd_run(const RunConfig& cfg, const std::string& out_dir, std::ostream* log);

/// One run per entry of cfg.taus: errors.csv, summary.csv (a row per tau),
/// diagnostics.csv of the smallest tau, optional errors.svg.
CommandOutput cmd_convergence(const RunConfig& cfg, const std::string& out_dir,
                              std::ostream* log);

/// Property checks; writes selfcheck.csv when out_dir is non-empty.
SelfCheckReport cmd_selfcheck(std::uint64_t seed, const std::string& out_dir, std::ostream* log);

}  // namespace nspnp
