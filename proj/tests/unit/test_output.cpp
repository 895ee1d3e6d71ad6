#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "nspnp/commands.hpp"
#include "nspnp/output.hpp"

using namespace nspnp;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("nspnp_test_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3, -2.5e-300, 12345678.9, 0.0}) {
    CHECK(std::stod(format_number(v)) == v);
  }
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()).empty());
}

TEST_CASE("csv schemas and headers") {
  std::vector<DiagRecord> trace(3);
  for (int k = 0; k < 3; ++k) {
    trace[k].step = k;
    trace[k].time = 0.1 * k;
    trace[k].energy_h = 5.0 - k;
    trace[k].xi = 1.0;
  }
  const auto d = lines(diagnostics_csv(trace));
  REQUIRE(d.size() == 5);
  CHECK(d[0] == std::string("# schema: ") + kDiagnosticsSchema);
  const auto head = split(d[1]);
  for (const char* col : {"step", "time", "mass_c1", "mass_c2", "min_c1", "max_c1", "min_c2",
                          "max_c2", "E_h", "E_orig", "diss_u", "diss_charge", "diss_drift", "xi",
                          "r"}) {
    CHECK(std::find(head.begin(), head.end(), col) != head.end());
  }
  CHECK(split(d[2]).size() == head.size());

  ErrorReport rep;
  rep.rows.resize(2);
  rep.rows[0].tau = 0.1;
  rep.rows[1].tau = 0.05;
  rep.rows[0].errors.fill(0.4);
  rep.rows[1].errors.fill(0.2);
  compute_rates(rep);
  const auto e = lines(errors_csv(rep));
  REQUIRE(e.size() == 4);
  CHECK(e[0] == std::string("# schema: ") + kErrorsSchema);
  const auto eh = split(e[1]);
  CHECK(eh.front() == "tau");
  CHECK(std::find(eh.begin(), eh.end(), "e_c1_L2") != eh.end());
  CHECK(std::find(eh.begin(), eh.end(), "rate_p_L2") != eh.end());
  const auto r1 = split(e[2]), r2 = split(e[3]);
  const auto rate_col = std::find(eh.begin(), eh.end(), "rate_u_H1") - eh.begin();
  CHECK(r1[rate_col].empty());
  CHECK(std::stod(r2[rate_col]) == doctest::Approx(1.0));
  CHECK(format_error_table(rep).find("0.05") != std::string::npos);
}

TEST_CASE("summary of a trace") {
  std::vector<DiagRecord> tr(4);
  const double e[] = {10.0, 9.0, 8.5, 8.6};
  for (int k = 0; k < 4; ++k) {
    tr[k].step = k;
    tr[k].time = 0.5 * k;
    tr[k].mass_c1 = 2.0 + (k == 2 ? 1e-10 : 0.0);
    tr[k].mass_c2 = 0.0;
    tr[k].min_c1 = 0.1 * (2 - k);
    tr[k].min_c2 = 1.0;
    tr[k].energy_h = e[k];
    tr[k].energy_orig = e[k] - 5;
    tr[k].diss_u = k > 0 ? 0.25 : 0.0;
    tr[k].xi = 1.0 + (k == 1 ? -0.02 : 0.01);
  }
  const auto s = summarize(tr);
  CHECK(s.steps == 3);
  CHECK(s.mass_drift_c1 == doctest::Approx(0.5e-10));
  CHECK(s.mass_drift_c2 == 0.0);
  CHECK(s.min_c1 == doctest::Approx(-0.1));
  CHECK(s.energy_law_excess == doctest::Approx(0.35));
  CHECK(s.original_energy_increase == doctest::Approx(0.1));
  CHECK(s.max_xi_deviation == doctest::Approx(0.02));
  CHECK(s.energy_h_final == 8.6);
  const auto csv = lines(summary_csv({s}));
  CHECK(csv[0] == std::string("# schema: ") + kSummarySchema);
  CHECK(split(csv[1]).size() == split(csv[2]).size());
}

TEST_CASE("svg plot") {
  const auto svg = svg_line_plot("Energy", "t", {{"E", {0, 1, 2}, {3, 2, 1}}, {"F", {0, 2}, {1, 1}}});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("Energy") != std::string::npos);
  const auto logp = svg_line_plot("err", "tau", {{"a", {0.1, 0.05}, {1e-2, 0.0}}}, true, true);
  CHECK(logp.find("</svg>") != std::string::npos);
}

TEST_CASE("commands write deterministic files") {
  const auto cfg = parse_config("case=example3\nnx=8\ntau=0.05\nt_final=0.15\n");
  const auto a = scratch_dir("run_a"), b = scratch_dir("run_b");
  const auto ra = cmd_run(cfg, a.string(), nullptr);
  cmd_run(cfg, b.string(), nullptr);
  for (const char* f : {"diagnostics.csv", "summary.csv", "energy.svg", "mass.svg", "extrema.svg",
                        "xi.svg"}) {
    CHECK(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK_FALSE(fs::exists(a / "errors.csv"));
  CHECK_FALSE(ra.errors.has_value());
  CHECK(lines(slurp(a / "diagnostics.csv")).size() == 2 + 4);

  auto conv = parse_config("case=example1\nnx=6\ntaus=0.1,0.05\nt_final=0.2\nsvg=false\n");
  const auto c = scratch_dir("conv");
  const auto out = cmd_convergence(conv, c.string(), nullptr);
  REQUIRE(out.errors.has_value());
  CHECK(out.errors->rows.size() == 2);
  CHECK(out.summaries.size() == 2);
  CHECK(fs::exists(c / "errors.csv"));
  CHECK(lines(slurp(c / "summary.csv")).size() == 4);
  CHECK_FALSE(fs::exists(c / "errors.svg"));
  // Diagnostics of the smallest step: 4 steps plus the initial record.
  CHECK(lines(slurp(c / "diagnostics.csv")).size() == 2 + 5);

  CHECK_THROWS_AS(cmd_convergence(cfg, c.string(), nullptr), ConfigError);

  const auto sc = scratch_dir("self");
  const auto rep = cmd_selfcheck(7, sc.string(), nullptr);
  CHECK(rep.failed() == 0);
  CHECK(fs::exists(sc / "selfcheck.csv"));
  for (const auto& d : {a, b, c, sc}) fs::remove_all(d);
}
