#include "nspnp/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nspnp {

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void header(std::ostringstream& os, const char* schema, const std::vector<std::string>& cols) {
  os << "# schema: " << schema << '\n';
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string diagnostics_csv(const std::vector<DiagRecord>& trace) {
  std::ostringstream os;
  header(os, kDiagnosticsSchema,
         {"step", "time", "mass_c1", "mass_c2", "min_c1", "max_c1", "min_c2", "max_c2", "E_h",
          "E_orig", "diss_u", "diss_charge", "diss_drift", "xi", "r", "diss_numerical"});
  for (const auto& d : trace) {
    os << d.step;
    for (double v : {d.time, d.mass_c1, d.mass_c2, d.min_c1, d.max_c1, d.min_c2, d.max_c2,
                     d.energy_h, d.energy_orig, d.diss_u, d.diss_charge, d.diss_drift, d.xi, d.r,
                     d.diss_numerical}) {
      os << ',' << format_number(v);
    }
    os << '\n';
  }
  return os.str();
}

std::string errors_csv(const ErrorReport& report) {
  std::vector<std::string> cols{"tau"};
  for (const char* name : kErrorColumns) {
    cols.push_back(std::string("e_") + name);
    cols.push_back(std::string("rate_") + name);
  }
  cols.push_back("h");
  std::ostringstream os;
  header(os, kErrorsSchema, cols);
  for (const auto& row : report.rows) {
    os << format_number(row.tau);
    for (std::size_t j = 0; j < row.errors.size(); ++j) {
      os << ',' << format_number(row.errors[j]) << ',' << format_number(row.rates[j]);
    }
    os << ',' << format_number(row.h) << '\n';
  }
  return os.str();
}

RunSummary summarize(const std::vector<DiagRecord>& trace) {
  if (trace.empty()) throw std::invalid_argument("summarize: empty trace");
  RunSummary s;
  const DiagRecord& first = trace.front();
  const DiagRecord& last = trace.back();
  s.steps = last.step;
  s.mass_c1_initial = first.mass_c1;
  s.mass_c2_initial = first.mass_c2;
  s.mass_c1_final = last.mass_c1;
  s.mass_c2_final = last.mass_c2;
  s.energy_h_initial = first.energy_h;
  s.energy_h_final = last.energy_h;
  s.energy_orig_final = last.energy_orig;
  s.r_final = last.r;
  s.min_c1 = std::numeric_limits<double>::infinity();
  s.min_c2 = std::numeric_limits<double>::infinity();
  s.energy_law_excess = -std::numeric_limits<double>::infinity();
  s.original_energy_increase = -std::numeric_limits<double>::infinity();
  auto scaled = [](double d, double m0) { return m0 != 0.0 ? std::abs(d) / std::abs(m0) : std::abs(d); };
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const auto& d = trace[k];
    s.min_c1 = std::min(s.min_c1, d.min_c1);
    s.min_c2 = std::min(s.min_c2, d.min_c2);
    s.mass_drift_c1 = std::max(s.mass_drift_c1, scaled(d.mass_c1 - first.mass_c1, first.mass_c1));
    s.mass_drift_c2 = std::max(s.mass_drift_c2, scaled(d.mass_c2 - first.mass_c2, first.mass_c2));
    if (k == 0) continue;
    const auto& prev = trace[k - 1];
    s.energy_law_excess = std::max(s.energy_law_excess, d.energy_h - prev.energy_h + d.diss_u +
                                                            d.diss_charge + d.diss_drift);
    if (k >= 2) {
      s.original_energy_increase =
          std::max(s.original_energy_increase, d.energy_orig - prev.energy_orig);
    }
    s.max_xi_deviation = std::max(s.max_xi_deviation, std::abs(d.xi - 1.0));
  }
  if (trace.size() < 2) s.energy_law_excess = std::numeric_limits<double>::quiet_NaN();
  if (trace.size() < 3) s.original_energy_increase = std::numeric_limits<double>::quiet_NaN();
  return s;
}

std::string summary_csv(const std::vector<RunSummary>& rows) {
  std::ostringstream os;
  header(os, kSummarySchema,
         {"case", "nx", "ny", "h", "tau", "t_final", "c0", "steps", "mass_c1_initial",
          "mass_c1_final", "mass_c2_initial", "mass_c2_final", "mass_drift_c1", "mass_drift_c2",
          "min_c1", "min_c2", "E_h_initial", "E_h_final", "energy_law_excess",
          "E_orig_increase", "E_orig_final", "max_abs_xi_minus_1", "r_final", "warnings"});
  for (const auto& s : rows) {
    os << s.case_name << ',' << s.nx << ',' << s.ny;
    for (double v : {s.h, s.tau, s.t_final, s.c0}) os << ',' << format_number(v);
    os << ',' << s.steps;
    for (double v : {s.mass_c1_initial, s.mass_c1_final, s.mass_c2_initial, s.mass_c2_final,
                     s.mass_drift_c1, s.mass_drift_c2, s.min_c1, s.min_c2, s.energy_h_initial,
                     s.energy_h_final, s.energy_law_excess, s.original_energy_increase,
                     s.energy_orig_final, s.max_xi_deviation, s.r_final}) {
      os << ',' << format_number(v);
    }
    os << ',' << s.warnings << '\n';
  }
  return os.str();
}

std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::vector<PlotSeries>& series, bool log_x, bool log_y) {
  constexpr double W = 640, H = 400, L = 70, R = 150, T = 40, B = 50;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#17becf"};
  auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!log_x || x > 0) && (!log_y || y > 0);
  };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-300) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12 * std::max(1.0, std::abs(y1))) {
    const double pad = std::max(1e-12, 1e-3 * std::abs(y1));
    y0 -= pad;
    y1 += pad;
  }
  auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream os;
  char buf[128];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << xml_escape(title) << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
     << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0;
    const double yv = y0 + (y1 - y0) * k / 4.0;
    std::snprintf(buf, sizeof buf, "%.3g", log_x ? std::pow(10.0, xv) : xv);
    os << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
       << buf << "</text>\n";
    std::snprintf(buf, sizeof buf, "%.4g", log_y ? std::pow(10.0, yv) : yv);
    os << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << buf
       << "</text>\n";
  }
  os << "<text x=\"" << L + (W - L - R) / 2 << "\" y=\"" << H - 10
     << "\" text-anchor=\"middle\">" << xml_escape(x_label) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = colors[k % (sizeof colors / sizeof *colors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(tx(s.x[i])), py(ty(s.y[i])));
      os << buf;
    }
    os << "\"/>\n";
    const double ly = T + 14 + 18.0 * static_cast<double>(k);
    os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - R + 30
       << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << W - R + 34 << "\" y=\"" << ly << "\">" << xml_escape(s.label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace nspnp
