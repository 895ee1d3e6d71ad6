#include "nspnp/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

namespace nspnp {

namespace {

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir.empty() ? "." : dir) / name).string();
}

RunOptions options_for(const RunConfig& cfg) {
  RunOptions o;
  o.cells = cfg.nx;
  o.velocity_boundary = cfg.velocity_boundary;
  o.error_metric = cfg.error_metric;
  return o;
}

RunSummary summary_for(const RunConfig& cfg, double tau, const RunResult& r) {
  RunSummary s = summarize(r.trace);
  const Rect b = make_case(cfg.tag).bounds;
  s.case_name = to_string(cfg.tag);
  s.nx = cfg.nx;
  s.ny = cfg.ny;
  s.h = (b.bx - b.ax) / cfg.nx;
  s.tau = tau;
  s.t_final = cfg.t_final;
  s.c0 = cfg.c0;
  s.warnings = static_cast<int>(r.warnings.size());
  return s;
}

std::string warnings_text(const std::vector<std::string>& w) {
  std::string out;
  for (const auto& line : w) out += line + '\n';
  return out;
}

std::vector<double> column(const std::vector<DiagRecord>& trace, double DiagRecord::*m) {
  std::vector<double> out;
  out.reserve(trace.size());
  for (const auto& d : trace) out.push_back(d.*m);
  return out;
}

void write(CommandOutput& out, const std::string& path, const std::string& text) {
  write_text_file(path, text);
  out.files.push_back(path);
}

void trace_plots(CommandOutput& out, const std::string& dir, const std::vector<DiagRecord>& tr) {
  const auto t = column(tr, &DiagRecord::time);
  write(out, join(dir, "energy.svg"),
        svg_line_plot("Energy", "t",
                      {{"E_h", t, column(tr, &DiagRecord::energy_h)},
                       {"E_orig", t, column(tr, &DiagRecord::energy_orig)}}));
  write(out, join(dir, "mass.svg"),
        svg_line_plot("Mass", "t",
                      {{"mass c1", t, column(tr, &DiagRecord::mass_c1)},
                       {"mass c2", t, column(tr, &DiagRecord::mass_c2)}}));
  write(out, join(dir, "extrema.svg"),
        svg_line_plot("Nodal extrema", "t",
                      {{"min c1", t, column(tr, &DiagRecord::min_c1)},
                       {"max c1", t, column(tr, &DiagRecord::max_c1)},
                       {"min c2", t, column(tr, &DiagRecord::min_c2)},
                       {"max c2", t, column(tr, &DiagRecord::max_c2)}}));
  write(out, join(dir, "xi.svg"), svg_line_plot("xi", "t", {{"xi", t, column(tr, &DiagRecord::xi)}}));
}

std::function<bool(const StepResult&)> progress(std::ostream* log, int steps, double tau) {
  if (!log) return {};
  const int every = std::max(1, steps / 10);
  return [log, every, steps, tau](const StepResult& r) {
    if (r.diag.step % every == 0 || r.diag.step == steps) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "  tau=%g step %d/%d  t=%.4g  E_h=%.10g  xi=%.8f\n", tau,
                    r.diag.step, steps, r.diag.time, r.diag.energy_h, r.diag.xi);
      *log << buf << std::flush;
    }
    return true;
  };
}

}  // namespace

std::string format_error_table(const ErrorReport& report) {
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-10s", "tau");
  os << buf;
  for (const char* name : kErrorColumns) {
    std::snprintf(buf, sizeof buf, " %10s %5s", name, "rate");
    os << buf;
  }
  os << '\n';
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof buf, "%-10.6g", row.tau);
    os << buf;
    for (std::size_t j = 0; j < row.errors.size(); ++j) {
      if (std::isnan(row.rates[j])) {
        std::snprintf(buf, sizeof buf, " %10.3e %5s", row.errors[j], "-");
      } else {
        std::snprintf(buf, sizeof buf, " %10.3e %5.2f", row.errors[j], row.rates[j]);
      }
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

CommandOutput cmd_run(const RunConfig& cfg, const std::string& out_dir, std::ostream* log) {
  validate(cfg);
  const ManufacturedCase mc = make_case(cfg.tag);
  const SchemeParams params = cfg.scheme_params(cfg.tau);
  RunOptions opts = options_for(cfg);
  opts.on_step = progress(log, params.num_steps(), cfg.tau);
  if (log) *log << "run " << to_string(cfg.tag) << " nx=" << cfg.nx << " tau=" << cfg.tau << '\n';
  const RunResult r = run_case(mc, params, opts);

  CommandOutput out;
  out.warnings = r.warnings;
  write(out, join(out_dir, "diagnostics.csv"), diagnostics_csv(r.trace));
  out.summaries.push_back(summary_for(cfg, cfg.tau, r));
  write(out, join(out_dir, "summary.csv"), summary_csv(out.summaries));
  if (r.errors) {
    ErrorReport rep;
    rep.rows.push_back(*r.errors);
    compute_rates(rep);
    write(out, join(out_dir, "errors.csv"), errors_csv(rep));
    out.errors = rep;
  }
  if (!r.warnings.empty()) write(out, join(out_dir, "warnings.log"), warnings_text(r.warnings));
  if (cfg.emit_svg) trace_plots(out, out_dir, r.trace);
  out.trace = r.trace;
  return out;
}

CommandOutput cmd_convergence(const RunConfig& cfg, const std::string& out_dir,
                              std::ostream* log) {
  validate(cfg);
  const ManufacturedCase mc = make_case(cfg.tag);
  if (!mc.has_exact) {
    throw ConfigError(0, "convergence needs a case with an exact solution (example1, example2)");
  }
  std::vector<RunSummary> summaries;
  std::vector<DiagRecord> finest;
  CommandOutput out;
  std::size_t k = 0;
  RunOptions opts = options_for(cfg);
  auto on_run = [&](const RunResult& r) {
    const double tau = cfg.taus[k++];
    summaries.push_back(summary_for(cfg, tau, r));
    finest = r.trace;
    out.warnings.insert(out.warnings.end(), r.warnings.begin(), r.warnings.end());
    // convergence_study reads opts by reference, so the next run sees this.
    if (k < cfg.taus.size()) {
      opts.on_step = progress(log, cfg.scheme_params(cfg.taus[k]).num_steps(), cfg.taus[k]);
    }
  };
  opts.on_step = progress(log, cfg.scheme_params(cfg.taus.front()).num_steps(), cfg.taus.front());
  if (log) *log << "convergence " << to_string(cfg.tag) << " nx=" << cfg.nx << '\n';
  ErrorReport report = convergence_study(mc, cfg.scheme_params(cfg.taus.front()), cfg.taus,
                                         opts, on_run);

  write(out, join(out_dir, "errors.csv"), errors_csv(report));
  write(out, join(out_dir, "summary.csv"), summary_csv(summaries));
  out.summaries = summaries;
  write(out, join(out_dir, "diagnostics.csv"), diagnostics_csv(finest));
  if (!out.warnings.empty()) write(out, join(out_dir, "warnings.log"), warnings_text(out.warnings));
  if (cfg.emit_svg) {
    std::vector<PlotSeries> series;
    for (std::size_t j = 0; j < kErrorColumns.size(); ++j) {
      PlotSeries s{kErrorColumns[j], {}, {}};
      for (const auto& row : report.rows) {
        s.x.push_back(row.tau);
        s.y.push_back(row.errors[j]);
      }
      series.push_back(std::move(s));
    }
    write(out, join(out_dir, "errors.svg"),
          svg_line_plot("Errors at t_final", "tau", series, true, true));
  }
  out.errors = std::move(report);
  out.trace = std::move(finest);
  return out;
}

SelfCheckReport cmd_selfcheck(std::uint64_t seed, const std::string& out_dir, std::ostream* log) {
  SelfCheckReport rep = run_selfcheck(seed);
  if (log) {
    for (const auto& c : rep.checks) {
      *log << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  " << c.detail << '\n';
    }
    *log << rep.passed() << " passed, " << rep.failed() << " failed\n";
  }
  if (!out_dir.empty()) {
    std::ostringstream os;
    os << "# schema: nspnp.selfcheck/1\ncheck,passed,detail\n";
    for (const auto& c : rep.checks) {
      os << '"' << c.name << "\"," << (c.passed ? 1 : 0) << ",\"" << c.detail << "\"\n";
    }
    write_text_file(join(out_dir, "selfcheck.csv"), os.str());
  }
  return rep;
}

}  // namespace nspnp
