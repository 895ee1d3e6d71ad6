#include "nspnp/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "nspnp/mms.hpp"
#include "nspnp/output.hpp"

namespace nspnp {

int SelfCheckReport::passed() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(),
                                        [](const CheckResult& c) { return c.passed; }));
}

int SelfCheckReport::failed() const { return static_cast<int>(checks.size()) - passed(); }

namespace {

CheckResult verdict(const std::string& name, double worst, double tol) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "worst %.3e (tol %.1e)", worst, tol);
  return {name, std::isfinite(worst) && worst <= tol, buf};
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

CheckResult quadrature_check() {
  const auto& q = QuadratureRule::degree5();
  double worst = 0.0;
  for (int a = 0; a <= 5; ++a) {
    for (int b = 0; a + b <= 5; ++b) {
      double sum = 0.0;
      for (std::size_t k = 0; k < q.weights.size(); ++k) {
        sum += q.weights[k] * std::pow(q.points[k][1], a) * std::pow(q.points[k][2], b);
      }
      const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
      worst = std::max(worst, std::abs(0.5 * sum - exact));
    }
  }
  return verdict("quadrature exactness, degree <= 5", worst, 1e-14);
}

double max_abs(const CsrMatrix& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<CheckResult> operator_checks() {
  const Rect box{0.0, 1.0, 0.0, 1.0};
  const auto disc = Discretization::create(box, 5, 5);
  double sym = 0.0;
  double kernel = 0.0;
  double area = 0.0;
  for (const auto& space : {disc.p1, disc.p2}) {
    const CsrMatrix m = assemble_mass(*space);
    const CsrMatrix a = assemble_stiffness(*space);
    sym = std::max({sym, m.asymmetry(), a.asymmetry()});
    const std::vector<double> ones(space->dof_count(), 1.0);
    kernel = std::max(kernel, max_abs(spmv(a, ones)) / max_abs(a));
    area = std::max(area, std::abs(dot(ones, spmv(m, ones)) - box.area()));
  }
  const auto vops = assemble_vector_operators(*disc.p2vec);
  sym = std::max({sym, vops.mass.asymmetry(), vops.stiffness.asymmetry()});

  // Column sums of convection and drift vanish because the P1 basis sums to one.
  const FieldVector u = interpolate(disc.p2vec, VectorFunction([](double x, double y, double) {
    return Vec2{std::sin(3 * x) + y, x * y - 0.5};
  }), 0.0);
  const FieldVector phi = interpolate(disc.p1, ScalarFunction([](double x, double y, double) {
    return std::cos(2 * x) * y + x;
  }), 0.0);
  double annihilation = 0.0;
  for (const CsrMatrix& k :
       {assemble_convection(u, *disc.p1), assemble_drift(phi, 1.0, *disc.p1)}) {
    std::vector<double> col_sums(k.cols(), 0.0);
    const std::vector<double> ones(k.rows(), 1.0);
    k.multiply_transpose(ones, col_sums);
    annihilation = std::max(annihilation, max_abs(col_sums) / max_abs(k));
  }
  return {verdict("mass/stiffness symmetry", sym, 1e-14),
          verdict("stiffness kernel contains constants", kernel, 1e-12),
          verdict("mass matrix integrates one to the area", area, 1e-13),
          verdict("convection/drift annihilate 1^T", annihilation, 1e-12)};
}

/// Dense Gaussian elimination with partial pivoting.
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    }
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

CheckResult solver_check(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    const std::size_t n = 20 + 10 * static_cast<std::size_t>(trial);
    const bool symmetric = trial % 2 == 0;
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && uni(rng) > 0.6) dense[i][j] = uni(rng);
      }
    }
    if (symmetric) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) dense[i][j] = dense[j][i];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += std::abs(dense[i][j]);
      dense[i][i] = row + 1.0 + std::abs(uni(rng));
    }
    std::vector<CsrMatrix::Triplet> trip;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (dense[i][j] != 0.0) trip.push_back({static_cast<int>(i), static_cast<int>(j), dense[i][j]});
      }
    }
    const CsrMatrix a = CsrMatrix::from_triplets(n, n, trip);
    std::vector<double> b(n);
    for (auto& v : b) v = uni(rng);
    const auto ref = dense_solve(dense, b);
    std::vector<double> x(n, 0.0);
    SolverOptions opts{1e-13, 1000, true};
    const auto rep = symmetric ? cg(a, b, x, opts) : bicgstab(a, b, x, opts);
    double err = rep.converged ? 0.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(x[i] - ref[i]));
    worst = std::max(worst, err / std::max(1e-300, max_abs(ref)));
  }
  return verdict("cg/bicgstab vs dense elimination", worst, 1e-8);
}

double d1(const std::function<double(double)>& f, double x) {
  const double h = 1e-5;
  return (f(x + h) - f(x - h)) / (2 * h);
}

double d2(const std::function<double(double)>& f, double x) {
  const double h = 1e-3;
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
         (12 * h * h);
}

CheckResult source_check(std::mt19937_64& rng) {
  double worst = 0.0;
  for (CaseTag tag : {CaseTag::Example1, CaseTag::Example2}) {
    const ManufacturedCase mc = make_case(tag);
    std::uniform_real_distribution<double> ux(mc.bounds.ax, mc.bounds.bx);
    std::uniform_real_distribution<double> uy(mc.bounds.ay, mc.bounds.by);
    std::uniform_real_distribution<double> ut(0.0, mc.default_t_final);
    auto field = [&](ExactField f) {
      return [&mc, f](double x, double y, double t) { return exact_eval(mc, f, x, y, t); };
    };
    const auto c1 = field(ExactField::C1), c2 = field(ExactField::C2), phi = field(ExactField::Phi);
    const auto ux_f = field(ExactField::Ux), uy_f = field(ExactField::Uy), p = field(ExactField::P);
    for (int k = 0; k < 100; ++k) {
      const double x = ux(rng), y = uy(rng), t = ut(rng);
      using F = std::function<double(double, double, double)>;
      auto dx = [&](const F& f) { return d1([&](double s) { return f(s, y, t); }, x); };
      auto dy = [&](const F& f) { return d1([&](double s) { return f(x, s, t); }, y); };
      auto dt = [&](const F& f) { return d1([&](double s) { return f(x, y, s); }, t); };
      auto lap = [&](const F& f) {
        return d2([&](double s) { return f(s, y, t); }, x) + d2([&](double s) { return f(x, s, t); }, y);
      };
      const double vx = ux_f(x, y, t), vy = uy_f(x, y, t);
      const double gpx = dx(phi), gpy = dy(phi), lp = lap(phi);
      auto transport = [&](const F& c, double sign) {
        const double div_flux = dx(c) * gpx + dy(c) * gpy + c(x, y, t) * lp;
        return dt(c) + vx * dx(c) + vy * dy(c) - lap(c) - sign * div_flux;
      };
      const double rho = c1(x, y, t) - c2(x, y, t);
      const double fux = dt(ux_f) + vx * dx(ux_f) + vy * dy(ux_f) - lap(ux_f) + dx(p) + rho * gpx;
      const double fuy = dt(uy_f) + vx * dx(uy_f) + vy * dy(uy_f) - lap(uy_f) + dy(p) + rho * gpy;
      const SourceValues s = source_eval(mc, x, y, t);
      const double pairs[4][2] = {{s.f_c1, transport(c1, +1.0)},
                                  {s.f_c2, transport(c2, -1.0)},
                                  {s.f_u.x, fux},
                                  {s.f_u.y, fuy}};
      for (const auto& pr : pairs) {
        worst = std::max(worst, std::abs(pr[0] - pr[1]) / std::max(1.0, std::abs(pr[1])));
      }
    }
  }
  return verdict("MMS sources vs finite differences (200 points)", worst, 1e-6);
}

CheckResult splitting_check(std::mt19937_64& rng) {
  const ManufacturedCase mc = make_case(CaseTag::Example1);
  SchemeParams params;
  params.tau = 0.1;
  params.c0 = mc.c0;
  params.t_final = 1.0;
  params.sources_enabled = true;
  ProblemData data{mc.sources, mc.u.value};
  const Scheme scheme(Discretization::create(mc.bounds, 6, 6), params, data);
  State s = scheme.init_state(mc.initial_c1, mc.initial_c2, mc.initial_u, mc.initial_p);
  s = scheme.advance(s).state;
  s = scheme.advance(s).state;
  const double t_next = (s.step + 1) * params.tau;
  const auto split = scheme.compute_velocity_split(s, t_next);
  std::uniform_real_distribution<double> uxi(0.5, 1.5);
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    worst = std::max(worst, scheme.momentum_residual(s, split, uxi(rng), t_next));
  }
  return verdict("splitting linearity residual", worst, 1e-9);
}

CheckResult determinism_check() {
  const ManufacturedCase mc = make_case(CaseTag::Example1);
  SchemeParams params;
  params.tau = 0.1;
  params.c0 = mc.c0;
  params.t_final = 0.3;
  RunOptions opts;
  opts.cells = 6;
  std::string first;
  bool same = true;
  for (int k = 0; k < 2; ++k) {
    const RunResult r = run_case(mc, params, opts);
    ErrorReport rep;
    rep.rows.push_back(*r.errors);
    const std::string text = diagnostics_csv(r.trace) + errors_csv(rep);
    if (k == 0) first = text;
    else same = text == first;
  }
  return {"repeated runs give byte-identical CSV", same, same ? "identical" : "outputs differ"};
}

template <class F>
CheckResult guarded(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {name, false, std::string("threw: ") + e.what()};
  }
}

}  // namespace

SelfCheckReport run_selfcheck(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SelfCheckReport rep;
  rep.checks.push_back(guarded("quadrature", [] { return quadrature_check(); }));
  try {
    for (auto& c : operator_checks()) rep.checks.push_back(c);
  } catch (const std::exception& e) {
    rep.checks.push_back({"operators", false, std::string("threw: ") + e.what()});
  }
  rep.checks.push_back(guarded("solvers", [&] { return solver_check(rng); }));
  rep.checks.push_back(guarded("sources", [&] { return source_check(rng); }));
  rep.checks.push_back(guarded("splitting", [&] { return splitting_check(rng); }));
  rep.checks.push_back(guarded("determinism", [] { return determinism_check(); }));
  return rep;
}

}  // namespace nspnp
