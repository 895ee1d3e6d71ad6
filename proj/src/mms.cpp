#include "nspnp/mms.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace nspnp {

namespace {

constexpr double kPi = std::numbers::pi;

// Shared form of the two manufactured solutions:
//   c1 = k1 + a1 C S(t), c2 = k2 + a2 C S(t), phi = C S / pi^2,
//   u = beta S U, p = S P, with C = cos(pi x) cos(pi y),
//   U = (sin 2pi x cos 2pi y, -sin 2pi y cos 2pi x), P = sin 2pi x sin 2pi y.
struct Family {
  double k1, a1, k2, a2, beta;
  bool squared;  // S = sin^2 t instead of sin t

  double s(double t) const { return squared ? std::sin(t) * std::sin(t) : std::sin(t); }
  double ds(double t) const { return squared ? 2.0 * std::sin(t) * std::cos(t) : std::cos(t); }

  static double cc(double x, double y) { return std::cos(kPi * x) * std::cos(kPi * y); }
  static Vec2 grad_cc(double x, double y) {
    return {-kPi * std::sin(kPi * x) * std::cos(kPi * y),
            -kPi * std::cos(kPi * x) * std::sin(kPi * y)};
  }
  static Vec2 uu(double x, double y) {
    return {std::sin(2 * kPi * x) * std::cos(2 * kPi * y),
            -std::sin(2 * kPi * y) * std::cos(2 * kPi * x)};
  }
  static Mat2 grad_uu(double x, double y) {
    const double sx = std::sin(2 * kPi * x), cx = std::cos(2 * kPi * x);
    const double sy = std::sin(2 * kPi * y), cy = std::cos(2 * kPi * y);
    return {2 * kPi * cx * cy, -2 * kPi * sx * sy, 2 * kPi * sx * sy, -2 * kPi * cx * cy};
  }
  static double pp(double x, double y) { return std::sin(2 * kPi * x) * std::sin(2 * kPi * y); }
  static Vec2 grad_pp(double x, double y) {
    return {2 * kPi * std::cos(2 * kPi * x) * std::sin(2 * kPi * y),
            2 * kPi * std::sin(2 * kPi * x) * std::cos(2 * kPi * y)};
  }

  double c1(double x, double y, double t) const { return k1 + a1 * cc(x, y) * s(t); }
  double c2(double x, double y, double t) const { return k2 + a2 * cc(x, y) * s(t); }
  double phi(double x, double y, double t) const { return cc(x, y) * s(t) / (kPi * kPi); }
  double p(double x, double y, double t) const { return pp(x, y) * s(t); }
  Vec2 u(double x, double y, double t) const {
    const Vec2 v = uu(x, y);
    return {beta * s(t) * v.x, beta * s(t) * v.y};
  }

  SourceValues sources(double x, double y, double t) const {
    const double st = s(t);
    const double dst = ds(t);
    const double c = cc(x, y);
    const Vec2 gc = grad_cc(x, y);
    const Vec2 vel = u(x, y, t);
    const Vec2 gphi{gc.x * st / (kPi * kPi), gc.y * st / (kPi * kPi)};
    const double lap_phi = -2.0 * c * st;

    auto transport = [&](double k, double a, double drift_sign) {
      const double conc = k + a * c * st;
      const Vec2 gconc{a * st * gc.x, a * st * gc.y};
      const double lap = -2.0 * kPi * kPi * a * c * st;
      const double div_flux = gconc.x * gphi.x + gconc.y * gphi.y + conc * lap_phi;
      return a * c * dst + (vel.x * gconc.x + vel.y * gconc.y) - lap - drift_sign * div_flux;
    };

    SourceValues out;
    out.f_c1 = transport(k1, a1, +1.0);
    out.f_c2 = transport(k2, a2, -1.0);

    const Vec2 uv = uu(x, y);
    const Mat2 gu = grad_uu(x, y);
    // (U . grad) U
    const Vec2 adv{uv.x * gu.xx + uv.y * gu.xy, uv.x * gu.yx + uv.y * gu.yy};
    const Vec2 gp = grad_pp(x, y);
    const double charge = c1(x, y, t) - c2(x, y, t);
    out.f_u.x = beta * dst * uv.x + beta * beta * st * st * adv.x +
                8.0 * kPi * kPi * beta * st * uv.x + st * gp.x + charge * gphi.x;
    out.f_u.y = beta * dst * uv.y + beta * beta * st * st * adv.y +
                8.0 * kPi * kPi * beta * st * uv.y + st * gp.y + charge * gphi.y;
    return out;
  }
};

Family family_of(CaseTag tag) {
  switch (tag) {
    case CaseTag::Example1:
      return {0.0, 3.0, 0.0, 1.0, 1.0, false};
    case CaseTag::Example2:
      return {1.1, 1.0, 1.1, -1.0, kPi, true};
    case CaseTag::Example3:
      break;
  }
  throw std::invalid_argument("Example3 has no exact solution");
}

void attach_exact(ManufacturedCase& mc, const Family f) {
  mc.has_exact = true;
  mc.c1.value = [f](double x, double y, double t) { return f.c1(x, y, t); };
  mc.c1.gradient = [f](double x, double y, double t) {
    const Vec2 g = Family::grad_cc(x, y);
    return Vec2{f.a1 * f.s(t) * g.x, f.a1 * f.s(t) * g.y};
  };
  mc.c2.value = [f](double x, double y, double t) { return f.c2(x, y, t); };
  mc.c2.gradient = [f](double x, double y, double t) {
    const Vec2 g = Family::grad_cc(x, y);
    return Vec2{f.a2 * f.s(t) * g.x, f.a2 * f.s(t) * g.y};
  };
  mc.phi.value = [f](double x, double y, double t) { return f.phi(x, y, t); };
  mc.phi.gradient = [f](double x, double y, double t) {
    const Vec2 g = Family::grad_cc(x, y);
    const double k = f.s(t) / (kPi * kPi);
    return Vec2{k * g.x, k * g.y};
  };
  mc.p.value = [f](double x, double y, double t) { return f.p(x, y, t); };
  mc.p.gradient = [f](double x, double y, double t) {
    const Vec2 g = Family::grad_pp(x, y);
    return Vec2{f.s(t) * g.x, f.s(t) * g.y};
  };
  mc.u.value = [f](double x, double y, double t) { return f.u(x, y, t); };
  mc.u.gradient = [f](double x, double y, double t) {
    const Mat2 g = Family::grad_uu(x, y);
    const double k = f.beta * f.s(t);
    return Mat2{k * g.xx, k * g.xy, k * g.yx, k * g.yy};
  };
  mc.sources.f_c1 = [f](double x, double y, double t) { return f.sources(x, y, t).f_c1; };
  mc.sources.f_c2 = [f](double x, double y, double t) { return f.sources(x, y, t).f_c2; };
  mc.sources.f_u = [f](double x, double y, double t) { return f.sources(x, y, t).f_u; };
  mc.initial_c1 = mc.c1.value;
  mc.initial_c2 = mc.c2.value;
  mc.initial_u = mc.u.value;
  mc.initial_p = mc.p.value;
}

}  // namespace

CaseTag parse_case_tag(const std::string& name) {
  std::string lower;
  for (char ch : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (lower == "example1") return CaseTag::Example1;
  if (lower == "example2") return CaseTag::Example2;
  if (lower == "example3") return CaseTag::Example3;
  throw std::invalid_argument("unknown case '" + name + "' (expected example1|example2|example3)");
}

std::string to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::Example1: return "example1";
    case CaseTag::Example2: return "example2";
    case CaseTag::Example3: return "example3";
  }
  return "unknown";
}

ManufacturedCase make_case(CaseTag tag) {
  ManufacturedCase mc;
  mc.tag = tag;
  switch (tag) {
    case CaseTag::Example1:
      mc.bounds = {-1.0, 1.0, -1.0, 1.0};
      mc.c0 = 10.0;
      mc.default_cells = 40;  // h = 0.05
      mc.default_t_final = 1.0;
      mc.default_taus = {1.0 / 10, 1.0 / 20, 1.0 / 40, 1.0 / 80};
      attach_exact(mc, family_of(tag));
      break;
    case CaseTag::Example2:
      mc.bounds = {-1.0, 1.0, -1.0, 1.0};
      mc.c0 = 10.0;
      mc.default_cells = 80;  // h = 0.025
      mc.default_t_final = 0.1;
      mc.default_taus = {1.0 / 100, 1.0 / 200, 1.0 / 400, 1.0 / 800};
      attach_exact(mc, family_of(tag));
      break;
    case CaseTag::Example3:
      mc.bounds = {0.0, 1.0, 0.0, 1.0};
      mc.c0 = 5.0;
      mc.default_cells = 100;  // h = 0.01
      mc.default_t_final = 1.0;
      mc.default_taus = {0.1, 0.05, 0.01, 0.005};
      mc.initial_c1 = [](double x, double, double) { return std::cos(kPi * x) + 1.0; };
      mc.initial_c2 = [](double, double y, double) { return std::cos(kPi * y) + 1.0; };
      mc.initial_u = [](double x, double y, double) {
        return Vec2{kPi * std::sin(kPi * x) * std::cos(kPi * y),
                    -kPi * std::sin(kPi * y) * std::cos(kPi * x)};
      };
      mc.initial_p = [](double, double, double) { return 0.0; };
      break;
  }
  return mc;
}

double exact_eval(const ManufacturedCase& c, ExactField field, double x, double y, double t) {
  if (!c.has_exact) {
    throw std::invalid_argument(to_string(c.tag) + " has no exact solution");
  }
  switch (field) {
    case ExactField::C1: return c.c1.value(x, y, t);
    case ExactField::C2: return c.c2.value(x, y, t);
    case ExactField::Phi: return c.phi.value(x, y, t);
    case ExactField::Ux: return c.u.value(x, y, t).x;
    case ExactField::Uy: return c.u.value(x, y, t).y;
    case ExactField::P: return c.p.value(x, y, t);
  }
  return 0.0;
}

SourceValues source_eval(const ManufacturedCase& c, double x, double y, double t) {
  if (!c.has_exact) return {};
  return family_of(c.tag).sources(x, y, t);
}

ErrorMetric parse_error_metric(const std::string& name) {
  if (name == "exact") return ErrorMetric::Exact;
  if (name == "interpolant") return ErrorMetric::Interpolant;
  throw std::invalid_argument("unknown error metric '" + name + "' (expected exact|interpolant)");
}

std::string to_string(ErrorMetric metric) {
  return metric == ErrorMetric::Exact ? "exact" : "interpolant";
}

namespace {

ErrorNorms field_error(const FieldVector& f, const ScalarExact& exact, double t,
                       ErrorMetric metric) {
  if (metric == ErrorMetric::Exact) return error_norms(f, exact, t);
  return difference_norms(f, interpolate(f.space, exact.value, t));
}

ErrorNorms field_error(const FieldVector& f, const VectorExact& exact, double t,
                       ErrorMetric metric) {
  if (metric == ErrorMetric::Exact) return error_norms(f, exact, t);
  return difference_norms(f, interpolate(f.space, exact.value, t));
}

}  // namespace

ErrorRow measure_errors(const ManufacturedCase& c, const State& s, double tau,
                        ErrorMetric metric) {
  if (!c.has_exact) {
    throw std::invalid_argument(to_string(c.tag) + " has no exact solution");
  }
  ErrorRow row;
  row.tau = tau;
  row.h = s.c1.space->mesh().h();
  const double t = s.time;
  const auto e_c1 = field_error(s.c1, c.c1, t, metric);
  const auto e_c2 = field_error(s.c2, c.c2, t, metric);
  const auto e_phi = field_error(s.phi, c.phi, t, metric);
  const auto e_u = field_error(s.u, c.u, t, metric);
  const auto e_p = field_error(s.p, c.p, t, metric);
  row.errors = {e_c1.l2, e_c1.h1, e_c2.l2, e_c2.h1, e_phi.l2, e_phi.h1, e_u.l2, e_u.h1, e_p.l2};
  row.rates.fill(std::numeric_limits<double>::quiet_NaN());
  return row;
}

RunResult run_case(const ManufacturedCase& c, SchemeParams params, const RunOptions& options) {
  params.sources_enabled = c.has_exact;
  const int cells = options.cells > 0 ? options.cells : c.default_cells;
  ProblemData data;
  if (c.has_exact) {
    data.sources = c.sources;
    if (options.velocity_boundary == VelocityBoundary::Exact) {
      data.velocity_boundary = c.u.value;
    }
  }
  Scheme scheme(Discretization::create(c.bounds, cells, cells), params, std::move(data));

  RunResult out;
  State s = scheme.init_state(c.initial_c1, c.initial_c2, c.initial_u, c.initial_p, &out.warnings);
  out.trace.push_back(scheme.initial_record(s));
  const int steps = params.num_steps();
  for (int n = 0; n < steps; ++n) {
    StepResult r = scheme.advance(s);
    out.warnings.insert(out.warnings.end(), r.warnings.begin(), r.warnings.end());
    out.trace.push_back(r.diag);
    const bool keep_going = !options.on_step || options.on_step(r);
    s = std::move(r.state);
    if (!keep_going) break;
  }
  if (c.has_exact) {
    out.errors = measure_errors(c, s, params.tau, options.error_metric);
  }
  out.final_state = std::move(s);
  return out;
}

void compute_rates(ErrorReport& report) {
  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    auto& row = report.rows[k];
    row.rates.fill(std::numeric_limits<double>::quiet_NaN());
    if (k == 0) continue;
    const auto& prev = report.rows[k - 1];
    const double ratio = prev.tau / row.tau;
    for (std::size_t j = 0; j < row.errors.size(); ++j) {
      if (row.errors[j] > 0.0 && prev.errors[j] > 0.0) {
        row.rates[j] = std::log(prev.errors[j] / row.errors[j]) / std::log(ratio);
      }
    }
  }
}

ErrorReport convergence_study(const ManufacturedCase& c, const SchemeParams& params,
                              const std::vector<double>& taus, const RunOptions& options,
                              const std::function<void(const RunResult&)>& on_run) {
  if (taus.empty()) {
    throw std::invalid_argument("convergence_study: empty tau list");
  }
  if (!c.has_exact) {
    throw std::invalid_argument("convergence_study: " + to_string(c.tag) + " has no exact solution");
  }
  for (std::size_t k = 1; k < taus.size(); ++k) {
    if (std::abs(taus[k - 1] / taus[k] - 2.0) > 1e-12 * 2.0) {
      throw std::invalid_argument("convergence_study: tau list must halve strictly");
    }
  }
  ErrorReport report;
  for (double tau : taus) {
    SchemeParams p = params;
    p.tau = tau;
    auto result = run_case(c, p, options);
    report.rows.push_back(*result.errors);
    if (on_run) on_run(result);
  }
  compute_rates(report);
  return report;
}

}  // namespace nspnp
