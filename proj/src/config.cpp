#include "nspnp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace nspnp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line, const std::string& key) {
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || !std::isfinite(out)) {
    throw ConfigError(line, "malformed number '" + v + "' for " + key);
  }
  return out;
}

long long parse_int(const std::string& v, int line, const std::string& key) {
  long long out = 0;
  const char* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), last, out);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError(line, "malformed integer '" + v + "' for " + key);
  }
  return out;
}

bool parse_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(line, "expected a boolean for " + key + ", got '" + v + "'");
}

std::vector<double> parse_list(const std::string& v, int line, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(line, "empty entry in " + key);
    // Allow 1/80 style entries, as the tables list them.
    const auto slash = item.find('/');
    if (slash != std::string::npos) {
      const double num = parse_double(trim(item.substr(0, slash)), line, key);
      const double den = parse_double(trim(item.substr(slash + 1)), line, key);
      if (den == 0.0) throw ConfigError(line, "division by zero in " + key);
      out.push_back(num / den);
    } else {
      out.push_back(parse_double(item, line, key));
    }
  }
  if (out.empty()) throw ConfigError(line, key + " is empty");
  return out;
}

int cells_for(double length, double h, int line) {
  if (!(h > 0.0)) throw ConfigError(line, "h must be positive");
  const double n = length / h;
  const double rounded = std::round(n);
  if (rounded < 1.0 || std::abs(n - rounded) > 1e-9 * std::max(1.0, n)) {
    throw ConfigError(line, "h does not divide the domain into whole cells");
  }
  return static_cast<int>(rounded);
}

}  // namespace

SchemeParams RunConfig::scheme_params(double step) const {
  SchemeParams p;
  p.tau = step;
  p.c0 = c0;
  p.t_final = t_final;
  p.concentration_solver = concentration_solver;
  p.poisson_solver = poisson_solver;
  p.velocity_solver = velocity_solver;
  p.data_time = data_time;
  return p;
}

RunConfig default_config(CaseTag tag) {
  const ManufacturedCase c = make_case(tag);
  RunConfig cfg;
  cfg.tag = tag;
  cfg.nx = c.default_cells;
  cfg.ny = c.default_cells;
  cfg.taus = c.default_taus;
  cfg.tau = c.default_taus.front();
  cfg.t_final = c.default_t_final;
  cfg.c0 = c.c0;
  cfg.velocity_boundary = c.has_exact ? VelocityBoundary::Exact : VelocityBoundary::NoSlip;
  return cfg;
}

RunConfig parse_config(const std::string& text) {
  struct Entry {
    int line;
    std::string value;
  };
  static const std::set<std::string> known = {
      "case", "nx", "ny", "h", "tau", "taus", "t_final", "c0", "tol", "tol_concentration",
      "tol_poisson", "tol_velocity", "max_iterations", "data_time", "error_reference",
      "velocity_boundary", "out", "svg", "seed"};

  std::vector<std::pair<std::string, Entry>> entries;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known.count(key)) throw ConfigError(line_no, "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(line_no, "duplicate key '" + key + "'");
    if (value.empty()) throw ConfigError(line_no, "missing value for " + key);
    entries.push_back({key, {line_no, value}});
  }

  auto find = [&](const std::string& key) -> const Entry* {
    for (const auto& [k, e] : entries) {
      if (k == key) return &e;
    }
    return nullptr;
  };

  const Entry* case_entry = find("case");
  if (!case_entry) throw ConfigError(0, "case required (example1 | example2 | example3)");
  CaseTag tag;
  try {
    tag = parse_case_tag(case_entry->value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(case_entry->line, e.what());
  }
  RunConfig cfg = default_config(tag);
  const Rect bounds = make_case(tag).bounds;

  if (const Entry* e = find("h")) {
    if (find("nx") || find("ny")) throw ConfigError(e->line, "give either h or nx/ny, not both");
    const double h = parse_double(e->value, e->line, "h");
    cfg.nx = cells_for(bounds.bx - bounds.ax, h, e->line);
    cfg.ny = cells_for(bounds.by - bounds.ay, h, e->line);
  }
  if (const Entry* e = find("nx")) {
    cfg.nx = static_cast<int>(parse_int(e->value, e->line, "nx"));
    if (cfg.nx < 1) throw ConfigError(e->line, "nx must be >= 1");
    if (!find("ny")) cfg.ny = cfg.nx;
  }
  if (const Entry* e = find("ny")) {
    cfg.ny = static_cast<int>(parse_int(e->value, e->line, "ny"));
    if (cfg.ny < 1) throw ConfigError(e->line, "ny must be >= 1");
    if (!find("nx")) cfg.nx = cfg.ny;
  }
  if (const Entry* e = find("taus")) {
    cfg.taus = parse_list(e->value, e->line, "taus");
    cfg.tau = cfg.taus.front();
  }
  if (const Entry* e = find("tau")) {
    const auto values = parse_list(e->value, e->line, "tau");
    if (values.size() != 1) {
      throw ConfigError(e->line, "tau takes a single value; use taus for a list");
    }
    cfg.tau = values.front();
    if (!(cfg.tau > 0.0)) throw ConfigError(e->line, "tau must be positive");
    if (!find("taus")) cfg.taus = {cfg.tau};
  }
  if (const Entry* e = find("t_final")) cfg.t_final = parse_double(e->value, e->line, "t_final");
  if (const Entry* e = find("c0")) cfg.c0 = parse_double(e->value, e->line, "c0");
  if (const Entry* e = find("tol")) {
    const double tol = parse_double(e->value, e->line, "tol");
    cfg.concentration_solver.tolerance = tol;
    cfg.poisson_solver.tolerance = tol;
    cfg.velocity_solver.tolerance = tol;
  }
  if (const Entry* e = find("tol_concentration")) {
    cfg.concentration_solver.tolerance = parse_double(e->value, e->line, "tol_concentration");
  }
  if (const Entry* e = find("tol_poisson")) {
    cfg.poisson_solver.tolerance = parse_double(e->value, e->line, "tol_poisson");
  }
  if (const Entry* e = find("tol_velocity")) {
    cfg.velocity_solver.tolerance = parse_double(e->value, e->line, "tol_velocity");
  }
  if (const Entry* e = find("max_iterations")) {
    const auto n = parse_int(e->value, e->line, "max_iterations");
    if (n < 1) throw ConfigError(e->line, "max_iterations must be >= 1");
    cfg.concentration_solver.max_iterations = static_cast<int>(n);
    cfg.poisson_solver.max_iterations = static_cast<int>(n);
    cfg.velocity_solver.max_iterations = static_cast<int>(n);
  }
  if (const Entry* e = find("data_time")) {
    if (e->value == "next") {
      cfg.data_time = DataTime::Next;
    } else if (e->value == "current") {
      cfg.data_time = DataTime::Current;
    } else {
      throw ConfigError(e->line, "data_time must be next or current");
    }
  }
  if (const Entry* e = find("error_reference")) {
    try {
      cfg.error_metric = parse_error_metric(e->value);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(e->line, ex.what());
    }
  }
  if (const Entry* e = find("velocity_boundary")) {
    if (e->value == "exact") {
      cfg.velocity_boundary = VelocityBoundary::Exact;
    } else if (e->value == "noslip") {
      cfg.velocity_boundary = VelocityBoundary::NoSlip;
    } else {
      throw ConfigError(e->line, "velocity_boundary must be exact or noslip");
    }
  }
  if (const Entry* e = find("out")) cfg.out_dir = e->value;
  if (const Entry* e = find("svg")) cfg.emit_svg = parse_bool(e->value, e->line, "svg");
  if (const Entry* e = find("seed")) {
    const auto s = parse_int(e->value, e->line, "seed");
    if (s < 0) throw ConfigError(e->line, "seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }

  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& cfg) {
  if (cfg.nx < 1 || cfg.ny < 1) throw ConfigError(0, "nx and ny must be >= 1");
  const Rect bounds = make_case(cfg.tag).bounds;
  const double hx = (bounds.bx - bounds.ax) / cfg.nx;
  const double hy = (bounds.by - bounds.ay) / cfg.ny;
  if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy)) {
    throw ConfigError(0, "nx and ny must give square cells on this domain");
  }
  if (!(cfg.tau > 0.0)) throw ConfigError(0, "tau must be positive");
  if (cfg.taus.empty()) throw ConfigError(0, "taus is empty");
  for (std::size_t k = 0; k < cfg.taus.size(); ++k) {
    if (!(cfg.taus[k] > 0.0)) throw ConfigError(0, "taus entries must be positive");
  }
  if (!(cfg.c0 > 0.0)) throw ConfigError(0, "c0 must be positive");
  for (const SolverOptions* s :
       {&cfg.concentration_solver, &cfg.poisson_solver, &cfg.velocity_solver}) {
    if (!(s->tolerance > 0.0) || s->tolerance >= 1.0) {
      throw ConfigError(0, "solver tolerances must lie in (0, 1)");
    }
  }
  try {
    cfg.scheme_params(cfg.tau).validate();
    for (double t : cfg.taus) cfg.scheme_params(t).validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
  const bool has_exact = make_case(cfg.tag).has_exact;
  if (!has_exact && cfg.velocity_boundary == VelocityBoundary::Exact) {
    throw ConfigError(0, "velocity_boundary=exact needs a case with an exact solution");
  }
  if (!has_exact && cfg.error_metric == ErrorMetric::Interpolant) {
    throw ConfigError(0, "error_reference needs a case with an exact solution");
  }
}

}  // namespace nspnp
