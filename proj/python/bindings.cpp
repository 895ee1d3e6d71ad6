#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nspnp/commands.hpp"
#include "nspnp/mms.hpp"
#include "nspnp/output.hpp"

namespace py = pybind11;
using namespace nspnp;

namespace {

RunOptions options_for(const RunConfig& cfg) {
  RunOptions o;
  o.cells = cfg.nx;
  o.velocity_boundary = cfg.velocity_boundary;
  o.error_metric = cfg.error_metric;
  return o;
}

py::dict error_row_dict(const ErrorRow& row) {
  py::dict d;
  d["tau"] = row.tau;
  d["h"] = row.h;
  for (std::size_t j = 0; j < kErrorColumns.size(); ++j) {
    d[(std::string("e_") + kErrorColumns[j]).c_str()] = row.errors[j];
    d[(std::string("rate_") + kErrorColumns[j]).c_str()] = row.rates[j];
  }
  return d;
}

py::dict trace_dict(const std::vector<DiagRecord>& tr) {
  auto col = [&](double DiagRecord::*m) {
    std::vector<double> v;
    for (const auto& d : tr) v.push_back(d.*m);
    return v;
  };
  std::vector<int> steps;
  for (const auto& d : tr) steps.push_back(d.step);
  py::dict d;
  d["step"] = steps;
  d["time"] = col(&DiagRecord::time);
  d["mass_c1"] = col(&DiagRecord::mass_c1);
  d["mass_c2"] = col(&DiagRecord::mass_c2);
  d["min_c1"] = col(&DiagRecord::min_c1);
  d["max_c1"] = col(&DiagRecord::max_c1);
  d["min_c2"] = col(&DiagRecord::min_c2);
  d["max_c2"] = col(&DiagRecord::max_c2);
  d["E_h"] = col(&DiagRecord::energy_h);
  d["E_orig"] = col(&DiagRecord::energy_orig);
  d["diss_u"] = col(&DiagRecord::diss_u);
  d["diss_charge"] = col(&DiagRecord::diss_charge);
  d["diss_drift"] = col(&DiagRecord::diss_drift);
  d["diss_numerical"] = col(&DiagRecord::diss_numerical);
  d["xi"] = col(&DiagRecord::xi);
  d["r"] = col(&DiagRecord::r);
  return d;
}

py::dict summary_dict(const RunSummary& s) {
  py::dict d;
  d["steps"] = s.steps;
  d["mass_drift_c1"] = s.mass_drift_c1;
  d["mass_drift_c2"] = s.mass_drift_c2;
  d["min_c1"] = s.min_c1;
  d["min_c2"] = s.min_c2;
  d["energy_h_initial"] = s.energy_h_initial;
  d["energy_h_final"] = s.energy_h_final;
  d["energy_law_excess"] = s.energy_law_excess;
  d["original_energy_increase"] = s.original_energy_increase;
  d["max_xi_deviation"] = s.max_xi_deviation;
  d["r_final"] = s.r_final;
  return d;
}

py::dict run(const RunConfig& cfg, const std::string& out_dir) {
  validate(cfg);
  CommandOutput out;
  {
    py::gil_scoped_release release;
    if (!out_dir.empty()) {
      out = cmd_run(cfg, out_dir, nullptr);
    } else {
      auto r = run_case(make_case(cfg.tag), cfg.scheme_params(cfg.tau), options_for(cfg));
      out.trace = std::move(r.trace);
      out.warnings = std::move(r.warnings);
      if (r.errors) out.errors = ErrorReport{{*r.errors}};
    }
  }
  py::dict d;
  d["trace"] = trace_dict(out.trace);
  d["summary"] = summary_dict(summarize(out.trace));
  d["errors"] = out.errors ? py::object(error_row_dict(out.errors->rows.front())) : py::none();
  d["warnings"] = out.warnings;
  return d;
}

py::list convergence(const RunConfig& cfg, const std::string& out_dir) {
  validate(cfg);
  ErrorReport rep;
  {
    py::gil_scoped_release release;
    if (!out_dir.empty()) {
      rep = *cmd_convergence(cfg, out_dir, nullptr).errors;
    } else {
      rep = convergence_study(make_case(cfg.tag), cfg.scheme_params(cfg.taus.front()), cfg.taus,
                              options_for(cfg));
    }
  }
  py::list rows;
  for (const auto& row : rep.rows) rows.append(error_row_dict(row));
  return rows;
}

}  // namespace

PYBIND11_MODULE(_nspnp, m) {
  m.doc() = "Decoupled SAV pressure-correction solver for the NS-PNP system";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<StepError>(m, "StepError", PyExc_RuntimeError);

  py::enum_<CaseTag>(m, "Case")
      .value("example1", CaseTag::Example1)
      .value("example2", CaseTag::Example2)
      .value("example3", CaseTag::Example3);
  py::enum_<DataTime>(m, "DataTime").value("next", DataTime::Next).value("current", DataTime::Current);
  py::enum_<ErrorMetric>(m, "ErrorMetric")
      .value("exact", ErrorMetric::Exact)
      .value("interpolant", ErrorMetric::Interpolant);
  py::enum_<VelocityBoundary>(m, "VelocityBoundary")
      .value("exact", VelocityBoundary::Exact)
      .value("noslip", VelocityBoundary::NoSlip);
  py::enum_<ExactField>(m, "Field")
      .value("c1", ExactField::C1)
      .value("c2", ExactField::C2)
      .value("phi", ExactField::Phi)
      .value("ux", ExactField::Ux)
      .value("uy", ExactField::Uy)
      .value("p", ExactField::P);

  py::class_<RunConfig>(m, "RunConfig")
      .def_readwrite("case", &RunConfig::tag)
      .def_readwrite("nx", &RunConfig::nx)
      .def_readwrite("ny", &RunConfig::ny)
      .def_readwrite("tau", &RunConfig::tau)
      .def_readwrite("taus", &RunConfig::taus)
      .def_readwrite("t_final", &RunConfig::t_final)
      .def_readwrite("c0", &RunConfig::c0)
      .def_readwrite("data_time", &RunConfig::data_time)
      .def_readwrite("error_reference", &RunConfig::error_metric)
      .def_readwrite("velocity_boundary", &RunConfig::velocity_boundary)
      .def_readwrite("out", &RunConfig::out_dir)
      .def_readwrite("svg", &RunConfig::emit_svg)
      .def_readwrite("seed", &RunConfig::seed)
      .def("validate", [](const RunConfig& c) { validate(c); });

  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("default_config", &default_config, py::arg("case"));

  m.def("run", &run, py::arg("config"), py::arg("out_dir") = "",
        "Run to t_final at config.tau; writes the run files when out_dir is given.");
  m.def("convergence", &convergence, py::arg("config"), py::arg("out_dir") = "",
        "One run per config.taus; returns a list of error rows.");
  m.def(
      "selfcheck",
      [](std::uint64_t seed) {
        SelfCheckReport rep;
        {
          py::gil_scoped_release release;
          rep = run_selfcheck(seed);
        }
        py::list out;
        for (const auto& c : rep.checks) out.append(py::make_tuple(c.name, c.passed, c.detail));
        return out;
      },
      py::arg("seed") = 20240917);

  m.def(
      "exact_eval",
      [](CaseTag tag, ExactField f, double x, double y, double t) {
        return exact_eval(make_case(tag), f, x, y, t);
      },
      py::arg("case"), py::arg("field"), py::arg("x"), py::arg("y"), py::arg("t"));
  m.def(
      "source_eval",
      [](CaseTag tag, double x, double y, double t) {
        const auto s = source_eval(make_case(tag), x, y, t);
        return py::make_tuple(s.f_c1, s.f_c2, s.f_u.x, s.f_u.y);
      },
      py::arg("case"), py::arg("x"), py::arg("y"), py::arg("t"));
  m.def(
      "solve_sav_quadratic",
      [](double a, double b, double c) {
        std::vector<std::string> w;
        const double xi = solve_sav_quadratic({a, b, c}, &w);
        return py::make_tuple(xi, w);
      },
      py::arg("a"), py::arg("b"), py::arg("c"));
  m.def(
      "mesh_counts",
      [](double ax, double bx, double ay, double by, int nx, int ny) {
        const auto mesh = build_rect_mesh({ax, bx, ay, by}, nx, ny);
        py::dict d;
        d["vertices"] = mesh.num_vertices();
        d["triangles"] = mesh.num_triangles();
        d["edges"] = mesh.num_edges();
        d["p2_nodes"] = mesh.num_p2_nodes();
        d["h"] = mesh.h();
        return d;
      },
      py::arg("ax"), py::arg("bx"), py::arg("ay"), py::arg("by"), py::arg("nx"), py::arg("ny"));
  m.attr("ERROR_COLUMNS") = std::vector<std::string>(kErrorColumns.begin(), kErrorColumns.end());
}
