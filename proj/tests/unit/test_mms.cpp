#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nspnp/mms.hpp"
#include "support/oracles.hpp"

using namespace nspnp;
using std::numbers::pi;

namespace {

// Residuals of the model equations from finite differences of exact_eval.
SourceValues fd_residuals(const ManufacturedCase& c, double x, double y, double t) {
  auto f = [&](ExactField k) {
    return [&c, k](double a, double b, double s) { return exact_eval(c, k, a, b, s); };
  };
  auto dx = [&](ExactField k, double a, double b, double s) {
    return oracle::d1([&](double v) { return f(k)(v, b, s); }, a);
  };
  auto dy = [&](ExactField k, double a, double b, double s) {
    return oracle::d1([&](double v) { return f(k)(a, v, s); }, b);
  };
  auto dt = [&](ExactField k) { return oracle::d1([&](double v) { return f(k)(x, y, v); }, t); };
  auto lap = [&](ExactField k) {
    return oracle::d2([&](double v) { return f(k)(v, y, t); }, x) +
           oracle::d2([&](double v) { return f(k)(x, v, t); }, y);
  };
  const double ux = f(ExactField::Ux)(x, y, t), uy = f(ExactField::Uy)(x, y, t);
  const double px = dx(ExactField::Phi, x, y, t), py = dy(ExactField::Phi, x, y, t);
  const double lphi = lap(ExactField::Phi);
  auto species = [&](ExactField k, double z) {
    const double cx = dx(k, x, y, t), cy = dy(k, x, y, t), cv = f(k)(x, y, t);
    return dt(k) + ux * cx + uy * cy - lap(k) - z * (cx * px + cy * py + cv * lphi);
  };
  const double rho = f(ExactField::C1)(x, y, t) - f(ExactField::C2)(x, y, t);
  auto momentum = [&](ExactField k) {
    return dt(k) + ux * dx(k, x, y, t) + uy * dy(k, x, y, t) - lap(k);
  };
  SourceValues out;
  out.f_c1 = species(ExactField::C1, 1.0);
  out.f_c2 = species(ExactField::C2, -1.0);
  out.f_u.x = momentum(ExactField::Ux) + dx(ExactField::P, x, y, t) + rho * px;
  out.f_u.y = momentum(ExactField::Uy) + dy(ExactField::P, x, y, t) + rho * py;
  return out;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("case names") {
  CHECK(parse_case_tag("example2") == CaseTag::Example2);
  CHECK(to_string(CaseTag::Example3) == "example3");
  CHECK_THROWS(parse_case_tag("example4"));
  CHECK(parse_error_metric("interpolant") == ErrorMetric::Interpolant);
  CHECK(to_string(ErrorMetric::Exact) == "exact");
  CHECK_THROWS(parse_error_metric("nodal"));
}

TEST_CASE("exact fields") {
  const auto e1 = make_case(CaseTag::Example1);
  CHECK(exact_eval(e1, ExactField::C1, 0.3, -0.7, 0.0) == 0.0);
  CHECK(exact_eval(e1, ExactField::Phi, 0.0, 0.0, pi / 2) == doctest::Approx(1.0 / (pi * pi)));
  CHECK(exact_eval(e1, ExactField::Phi, 0.5, 0.5, pi / 2) == doctest::Approx(0.0));
  CHECK(exact_eval(e1, ExactField::P, 0.25, 0.25, pi / 2) == doctest::Approx(1.0));
  CHECK(exact_eval(e1, ExactField::Ux, 0.25, 0.0, pi / 2) == doctest::Approx(1.0));
  const auto e2 = make_case(CaseTag::Example2);
  const auto e3 = make_case(CaseTag::Example3);
  CHECK_THROWS(exact_eval(e3, ExactField::C1, 0, 0, 0));

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1), ut(0, 2);
  for (int k = 0; k < 100; ++k) {
    const double x = u(rng), y = u(rng), t = ut(rng);
    CHECK(exact_eval(e2, ExactField::C1, x, y, t) + exact_eval(e2, ExactField::C2, x, y, t) ==
          doctest::Approx(2.2).epsilon(1e-15));
    CHECK(exact_eval(e2, ExactField::C1, x, y, t) > 0.0);
    CHECK(exact_eval(e2, ExactField::C2, x, y, t) > 0.0);
    for (const auto* c : {&e1, &e2}) {
      // Pointwise identities: div u = 0 and -lap(phi) = 2 pi^2 phi = c1 - c2.
      const auto g = c->u.gradient(x, y, t);
      CHECK(std::abs(g.xx + g.yy) <= 1e-12);
      const double rho = exact_eval(*c, ExactField::C1, x, y, t) - exact_eval(*c, ExactField::C2, x, y, t);
      CHECK(std::abs(2 * pi * pi * exact_eval(*c, ExactField::Phi, x, y, t) - rho) <= 1e-12);
      // Exact gradients against finite differences.
      const auto gp = c->phi.gradient(x, y, t);
      CHECK(close(gp.x, oracle::d1([&](double v) { return c->phi.value(v, y, t); }, x)));
      CHECK(close(g.xy, oracle::d1([&](double v) { return c->u.value(x, v, t).x; }, y)));
    }
  }
}

TEST_CASE("sources match finite-difference residuals") {
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> u(-1, 1), ut(0, 1.5);
  for (auto tag : {CaseTag::Example1, CaseTag::Example2}) {
    const auto c = make_case(tag);
    for (int k = 0; k < 100; ++k) {
      const double x = u(rng), y = u(rng), t = ut(rng);
      const auto a = source_eval(c, x, y, t);
      const auto r = fd_residuals(c, x, y, t);
      CHECK(close(a.f_c1, r.f_c1));
      CHECK(close(a.f_c2, r.f_c2));
      CHECK(close(a.f_u.x, r.f_u.x));
      CHECK(close(a.f_u.y, r.f_u.y));
      CHECK(c.sources.f_c1(x, y, t) == a.f_c1);
    }
  }
  const auto e1 = make_case(CaseTag::Example1);
  const auto s0 = source_eval(e1, 0.2, -0.4, 0.0);
  CHECK(s0.f_c1 == doctest::Approx(3 * std::cos(0.2 * pi) * std::cos(-0.4 * pi)));
  const auto e3 = make_case(CaseTag::Example3);
  const auto z = source_eval(e3, 0.2, 0.3, 0.5);
  CHECK(z.f_c1 == 0.0);
  CHECK(z.f_u.x == 0.0);
}

TEST_CASE("species sources have equal integrals") {
  const auto c = make_case(CaseTag::Example2);
  const StructuredTriMesh mesh(c.bounds, 20, 20);
  for (double t : {0.05, 0.3, 1.0}) {
    const double d = integrate(mesh, [&](double x, double y, double s) {
      return c.sources.f_c1(x, y, s) - c.sources.f_c2(x, y, s); }, t);
    CHECK(std::abs(d) <= 1e-12);
  }
}

TEST_CASE("case defaults") {
  const auto e1 = make_case(CaseTag::Example1);
  CHECK(e1.c0 == 10.0);
  CHECK((e1.bounds.bx - e1.bounds.ax) / e1.default_cells == doctest::Approx(0.05));
  CHECK(e1.default_taus.size() == 4);
  const auto e2 = make_case(CaseTag::Example2);
  CHECK((e2.bounds.bx - e2.bounds.ax) / e2.default_cells == doctest::Approx(0.025));
  CHECK(e2.default_t_final == 0.1);
  const auto e3 = make_case(CaseTag::Example3);
  CHECK(e3.c0 == 5.0);
  CHECK_FALSE(e3.has_exact);
  CHECK(e3.default_cells == 100);
}

TEST_CASE("run and convergence driver") {
  const auto c = make_case(CaseTag::Example1);
  SchemeParams p;
  p.c0 = c.c0;
  p.t_final = 0.2;
  RunOptions o;
  o.cells = 6;

  const auto single = convergence_study(c, p, {0.1}, o);
  REQUIRE(single.rows.size() == 1);
  for (double r : single.rows[0].rates) CHECK(std::isnan(r));
  for (double e : single.rows[0].errors) CHECK(e > 0.0);
  CHECK_THROWS(convergence_study(c, p, {0.1, 0.04}, o));
  CHECK_THROWS(convergence_study(c, p, {}, o));
  CHECK_THROWS(convergence_study(make_case(CaseTag::Example3), p, {0.1}, o));

  int calls = 0;
  const auto two = convergence_study(c, p, {0.1, 0.05}, o, [&](const RunResult& r) {
    ++calls;
    CHECK(r.final_state.time == doctest::Approx(0.2));
  });
  CHECK(calls == 2);
  for (std::size_t j = 0; j < kErrorColumns.size(); ++j) {
    CHECK(two.rows[1].rates[j] ==
          doctest::Approx(std::log2(two.rows[0].errors[j] / two.rows[1].errors[j])));
  }

  // Early stop through on_step.
  p.tau = 0.05;
  o.on_step = [](const StepResult& r) { return r.diag.step < 2; };
  const auto early = run_case(c, p, o);
  CHECK(early.final_state.step == 2);
  CHECK(early.trace.size() == 3);
}

TEST_CASE("interpolated exact initial data reproduces the standard run") {
  const auto c = make_case(CaseTag::Example1);
  SchemeParams p;
  p.c0 = c.c0;
  p.tau = 0.1;
  p.t_final = 0.3;
  p.sources_enabled = true;
  const Scheme s(Discretization::create(c.bounds, 6, 6), p, ProblemData{c.sources, c.u.value});
  auto a = s.init_state(c.initial_c1, c.initial_c2, c.initial_u, c.initial_p);
  auto b = s.init_state(c.c1.value, c.c2.value, c.u.value, c.p.value);
  for (int n = 0; n < 3; ++n) {
    a = s.advance(a).state;
    b = s.advance(b).state;
  }
  CHECK(a.c1.values == b.c1.values);
  CHECK(a.u.values == b.u.values);
  CHECK(a.p.values == b.p.values);
}

TEST_CASE("interpolant metric removes the spatial interpolation error") {
  const auto c = make_case(CaseTag::Example1);
  const auto d = Discretization::create(c.bounds, 8, 8);
  State s;
  const double t = 0.7;
  s.time = t;
  s.c1 = interpolate(d.p1, c.c1.value, t);
  s.c2 = interpolate(d.p1, c.c2.value, t);
  s.phi = interpolate(d.p1, c.phi.value, t);
  s.p = interpolate(d.p1, c.p.value, t);
  s.u = interpolate(d.p2vec, c.u.value, t);
  const auto zero = measure_errors(c, s, 0.1, ErrorMetric::Interpolant);
  for (double e : zero.errors) CHECK(e <= 1e-14);
  const auto exact = measure_errors(c, s, 0.1, ErrorMetric::Exact);
  for (double e : exact.errors) CHECK(e > 1e-4);
  CHECK(exact.h == doctest::Approx(0.25));
}

TEST_CASE("one Example 2 step, pinned") {
  const auto c = make_case(CaseTag::Example2);
  SchemeParams p;
  p.c0 = c.c0;
  p.tau = 0.01;
  p.t_final = 0.01;
  const auto r = run_case(c, p);
  REQUIRE(r.errors);
  const double e = r.errors->errors[0];
  CHECK(e < p.tau);
  CHECK(e == doctest::Approx(8.5296631456707714e-05).epsilon(1e-6));
}
