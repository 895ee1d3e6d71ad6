#include "nspnp/scheme.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace nspnp {

void SchemeParams::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("tau must be positive");
  }
  if (!(c0 > 0.0)) {
    throw std::invalid_argument("C0 must be positive");
  }
  if (!(t_final > 0.0)) {
    throw std::invalid_argument("t_final must be positive");
  }
  const double n = t_final / tau;
  if (std::abs(n - std::round(n)) > 1e-12 * std::max(1.0, n)) {
    throw std::invalid_argument("t_final must be an integer multiple of tau");
  }
}

int SchemeParams::num_steps() const { return static_cast<int>(std::lround(t_final / tau)); }

double solve_sav_quadratic(const SplitCoefficients& k, std::vector<std::string>* warnings) {
  auto warn = [warnings](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };
  const double a = k.a;
  const double b = k.b;
  const double c = k.c;
  if (std::abs(a) <= 1e-14 * std::max(std::abs(b), 1.0)) {
    if (std::abs(b) <= 1e-14 * std::max(std::abs(c), 1.0)) {
      warn("sav quadratic fully degenerate, xi set to 1");
      return 1.0;
    }
    return c / b;
  }
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    std::ostringstream os;
    os << "sav quadratic discriminant " << disc << " clamped to 0";
    warn(os.str());
    disc = 0.0;
  }
  // Cancellation-free pair of roots of a x^2 - b x + c.
  const double q = 0.5 * (b + std::copysign(std::sqrt(disc), b));
  const double root1 = q / a;
  const double root2 = (q != 0.0) ? c / q : root1;
  return std::abs(root1 - 1.0) <= std::abs(root2 - 1.0) ? root1 : root2;
}

namespace {

CsrMatrix eliminated(const CsrMatrix& a, const std::vector<int>& dofs) {
  CsrMatrix out = a;
  std::vector<double> scratch(a.rows(), 0.0);
  apply_dirichlet(out, scratch, dofs, 0.0);
  return out;
}

void require_converged(const SolveReport& r, int step, const char* what) {
  if (!r.converged) {
    std::ostringstream os;
    os << what << " solve failed (iterations " << r.iterations << ", residual "
       << r.relative_residual << ")";
    if (!r.message.empty()) os << ": " << r.message;
    throw StepError(step, os.str());
  }
}

}  // namespace

Scheme::Scheme(Discretization disc, SchemeParams params, ProblemData data)
    : disc_(std::move(disc)), params_(params), data_(std::move(data)) {
  params_.validate();
  m1_ = assemble_mass(*disc_.p1);
  a1_ = assemble_stiffness(*disc_.p1);
  auto vops = assemble_vector_operators(*disc_.p2vec);
  mv_ = std::move(vops.mass);
  av_ = std::move(vops.stiffness);
  b_ = assemble_div_coupling(*disc_.p2vec, *disc_.p1);
  g_ = assemble_gradient_coupling(*disc_.p2vec, *disc_.p1);
  p1_weights_.assign(m1_.rows(), 0.0);
  const std::vector<double> ones(m1_.rows(), 1.0);
  m1_.multiply(ones, p1_weights_);
  vel_bdofs_ = boundary_dofs(*disc_.mesh, SpaceKind::P2Vector);

  const double inv_tau = 1.0 / params_.tau;
  const std::array<double, 2> coeffs{inv_tau, 1.0};
  const std::array<const CsrMatrix*, 2> mats{&mv_, &av_};
  vel_system_ = linear_combination(coeffs, mats);
  vel_system_bc_ = eliminated(vel_system_, vel_bdofs_);
  vel_mass_bc_ = eliminated(mv_, vel_bdofs_);
}

double Scheme::partial_energy(const FieldVector& phi) const {
  return 0.5 * quadratic_form(a1_, phi.values) + params_.c0;
}

FieldVector Scheme::solve_poisson(std::vector<double> rhs, const FieldVector* guess,
                                  SolveReport* report) const {
  FieldVector x(disc_.p1);
  if (guess) x.values = guess->values;
  *report = cg(a1_, rhs, x.values, params_.poisson_solver, true, p1_weights_);
  return x;
}

State Scheme::init_state(const ScalarFunction& c1_0, const ScalarFunction& c2_0,
                         const VectorFunction& u_0, const ScalarFunction& p_0,
                         std::vector<std::string>* warnings) const {
  const auto& mesh = *disc_.mesh;
  const auto& quad = QuadratureRule::degree5();
  double min_c = std::numeric_limits<double>::infinity();
  for (const auto& tri : mesh.triangles()) {
    const auto& v = mesh.vertices();
    for (const auto& l : quad.points) {
      const double x = l[0] * v[tri[0]].x + l[1] * v[tri[1]].x + l[2] * v[tri[2]].x;
      const double y = l[0] * v[tri[0]].y + l[1] * v[tri[1]].y + l[2] * v[tri[2]].y;
      min_c = std::min({min_c, c1_0(x, y, 0.0), c2_0(x, y, 0.0)});
    }
  }
  if (min_c < 0.0 && warnings) {
    std::ostringstream os;
    os << "initial concentrations negative at quadrature points (min " << min_c << ")";
    warnings->push_back(os.str());
  }

  State s;
  s.c1 = interpolate(disc_.p1, c1_0, 0.0);
  s.c2 = interpolate(disc_.p1, c2_0, 0.0);
  s.u = interpolate(disc_.p2vec, u_0, 0.0);
  s.u_hat = s.u;
  s.p = interpolate(disc_.p1, p_0, 0.0);
  const double p_mean = dot(p1_weights_, s.p.values) / disc_.mesh->bounds().area();
  for (auto& v : s.p.values) v -= p_mean;

  std::vector<double> rho(s.c1.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = s.c1.values[i] - s.c2.values[i];
  SolveReport report;
  s.phi = solve_poisson(spmv(m1_, rho), nullptr, &report);
  require_converged(report, 0, "initial potential");
  s.r = std::sqrt(partial_energy(s.phi));
  s.step = 0;
  s.time = 0.0;
  return s;
}

ConcentrationUpdate Scheme::step_concentrations(const State& s, double t_next) const {
  const double inv_tau = 1.0 / params_.tau;
  const CsrMatrix k = assemble_convection(s.u, *disc_.p1);
  ConcentrationUpdate out;
  auto solve_one = [&](const FieldVector& c, double sign, const ScalarFunction& f,
                       SolveReport* report) {
    const CsrMatrix d = assemble_drift(s.phi, sign, *disc_.p1);
    const std::array<double, 4> coeffs{inv_tau, 1.0, 1.0, 1.0};
    const std::array<const CsrMatrix*, 4> mats{&m1_, &a1_, &k, &d};
    const CsrMatrix system = linear_combination(coeffs, mats);
    std::vector<double> rhs = spmv(m1_, c.values);
    for (auto& v : rhs) v *= inv_tau;
    if (params_.sources_enabled && f) {
      const FieldVector load = assemble_load(disc_.p1, f, data_time(t_next));
      for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += load.values[i];
    }
    FieldVector next = c;
    *report = bicgstab(system, rhs, next.values, params_.concentration_solver);
    return next;
  };
  out.c1 = solve_one(s.c1, +1.0, data_.sources.f_c1, &out.report_c1);
  require_converged(out.report_c1, s.step + 1, "c1");
  out.c2 = solve_one(s.c2, -1.0, data_.sources.f_c2, &out.report_c2);
  require_converged(out.report_c2, s.step + 1, "c2");
  return out;
}

PotentialUpdate Scheme::step_potential(const FieldVector& c1_next, const FieldVector& c2_next,
                                       const FieldVector* guess) const {
  std::vector<double> rho(c1_next.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = c1_next.values[i] - c2_next.values[i];
  std::vector<double> rhs = spmv(m1_, rho);
  PotentialUpdate out;
  const double total = std::accumulate(rhs.begin(), rhs.end(), 0.0);
  const double norm = norm2(rhs);
  out.rhs_mean_deviation = norm > 0.0 ? std::abs(total) / norm : 0.0;
  if (out.rhs_mean_deviation > 1e-8) {
    std::ostringstream os;
    os << "potential rhs mean deviation " << out.rhs_mean_deviation << " (net charge drift)";
    out.warnings.push_back(os.str());
  }
  out.phi = solve_poisson(std::move(rhs), guess, &out.report);
  return out;
}

double Scheme::data_time(double t_next) const {
  return params_.data_time == DataTime::Next ? t_next : t_next - params_.tau;
}

std::vector<double> Scheme::boundary_values(double t) const {
  std::vector<double> g(disc_.p2vec->dof_count(), 0.0);
  if (!data_.velocity_boundary) return g;
  const std::size_t n = disc_.p2vec->node_count();
  for (int d : vel_bdofs_) {
    const auto node = static_cast<std::size_t>(d) % n;
    const Point2 x = disc_.p2vec->node_coords(node);
    const Vec2 v = data_.velocity_boundary(x.x, x.y, t);
    g[static_cast<std::size_t>(d)] = (static_cast<std::size_t>(d) < n) ? v.x : v.y;
  }
  return g;
}

void Scheme::impose_boundary(std::vector<double>& rhs, const std::vector<double>& g) const {
  const auto lift = spmv(vel_system_, g);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= lift[i];
  for (int d : vel_bdofs_) rhs[static_cast<std::size_t>(d)] = g[static_cast<std::size_t>(d)];
}

std::vector<double> Scheme::momentum_rhs_u1(const State& s, double t_next) const {
  const double inv_tau = 1.0 / params_.tau;
  std::vector<double> rhs = spmv(mv_, s.u.values);
  for (auto& v : rhs) v *= inv_tau;
  std::vector<double> btp(rhs.size());
  b_.multiply_transpose(s.p.values, btp);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += btp[i];
  if (params_.sources_enabled && data_.sources.f_u) {
    const FieldVector load = assemble_load(disc_.p2vec, data_.sources.f_u, data_time(t_next));
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += load.values[i];
  }
  return rhs;
}

VelocitySplit Scheme::compute_velocity_split(const State& s, double t_next) const {
  VelocitySplit out;
  const int step = s.step + 1;

  auto rhs1 = momentum_rhs_u1(s, t_next);
  const auto g = boundary_values(data_time(t_next));
  impose_boundary(rhs1, g);
  out.u1 = s.u;
  for (int d : vel_bdofs_) out.u1.values[d] = g[d];
  const auto rep1 = cg(vel_system_bc_, rhs1, out.u1.values, params_.velocity_solver);
  require_converged(rep1, step, "u_hat_1");

  out.explicit_load = assemble_advection_load(s.u);
  const auto force = assemble_electric_force_load(s.c1, s.c2, s.phi, *disc_.p2vec);
  for (std::size_t i = 0; i < force.size(); ++i) out.explicit_load[i] += force[i];
  std::vector<double> rhs2(out.explicit_load.size());
  for (std::size_t i = 0; i < rhs2.size(); ++i) rhs2[i] = -out.explicit_load[i];
  for (int d : vel_bdofs_) rhs2[d] = 0.0;
  out.u2 = FieldVector(disc_.p2vec);
  const auto rep2 = cg(vel_system_bc_, rhs2, out.u2.values, params_.velocity_solver);
  require_converged(rep2, step, "u_hat_2");
  return out;
}

double Scheme::momentum_residual(const State& s, const VelocitySplit& split, double xi,
                                 double t_next) const {
  std::vector<double> u_hat(split.u1.size());
  for (std::size_t i = 0; i < u_hat.size(); ++i) {
    u_hat[i] = split.u1.values[i] + xi * split.u2.values[i];
  }
  auto rhs = momentum_rhs_u1(s, t_next);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= xi * split.explicit_load[i];
  const auto lhs = spmv(vel_system_, u_hat);
  std::vector<char> pinned(rhs.size(), 0);
  for (int d : vel_bdofs_) pinned[d] = 1;
  double res = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    if (pinned[i]) continue;
    res += (lhs[i] - rhs[i]) * (lhs[i] - rhs[i]);
    ref += rhs[i] * rhs[i];
  }
  return ref > 0.0 ? std::sqrt(res / ref) : std::sqrt(res);
}

XiSolution Scheme::solve_xi(const State& s, const VelocitySplit& split, const FieldVector& c1_next,
                            const FieldVector& c2_next, const FieldVector& phi_next,
                            double t_next) const {
  const double tau = params_.tau;
  XiSolution out;
  out.energy_next = partial_energy(phi_next);
  if (out.energy_next < 1.0) {
    std::ostringstream os;
    os << "E(phi) = " << out.energy_next << " < 1; increase C0";
    out.warnings.push_back(os.str());
  }
  const double sqrt_e = std::sqrt(out.energy_next);

  std::vector<double> rho(c1_next.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = c1_next.values[i] - c2_next.values[i];
  double c = tau * quadratic_form(m1_, rho) +
             tau * integrate_drift_dissipation(c1_next, c2_next, phi_next);
  if (params_.sources_enabled && (data_.sources.f_c1 || data_.sources.f_c2)) {
    const double t_data = data_time(t_next);
    double work = 0.0;
    if (data_.sources.f_c1) {
      work += dot(assemble_load(disc_.p1, data_.sources.f_c1, t_data).values, phi_next.values);
    }
    if (data_.sources.f_c2) {
      work -= dot(assemble_load(disc_.p1, data_.sources.f_c2, t_data).values, phi_next.values);
    }
    c -= tau * work;
  }
  out.coeffs.a = 2.0 * out.energy_next - tau * dot(split.explicit_load, split.u2.values);
  out.coeffs.b = 2.0 * s.r * sqrt_e + tau * dot(split.explicit_load, split.u1.values);
  out.coeffs.c = c;
  out.xi = solve_sav_quadratic(out.coeffs, &out.warnings);
  out.r_next = out.xi * sqrt_e;
  if (!(out.r_next > 0.0)) {
    std::ostringstream os;
    os << "auxiliary variable r = " << out.r_next << " is not positive";
    out.warnings.push_back(os.str());
  }
  return out;
}

ProjectionUpdate Scheme::pressure_projection(const FieldVector& u_hat_next, const State& s) const {
  const double tau = params_.tau;
  const int step = s.step + 1;
  ProjectionUpdate out;

  std::vector<double> rhs = spmv(b_, u_hat_next.values);
  const auto ap = spmv(a1_, s.p.values);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -rhs[i] / tau + ap[i];
  SolveReport rep;
  out.p = solve_poisson(std::move(rhs), &s.p, &rep);
  require_converged(rep, step, "pressure");

  std::vector<double> dp(out.p.size());
  for (std::size_t i = 0; i < dp.size(); ++i) dp[i] = out.p.values[i] - s.p.values[i];
  std::vector<double> grad_load = spmv(g_, dp);
  std::vector<double> lifted_rhs = grad_load;
  for (int d : vel_bdofs_) lifted_rhs[d] = 0.0;
  std::vector<double> lifted(lifted_rhs.size(), 0.0);
  const auto rep_l2 = cg(vel_mass_bc_, lifted_rhs, lifted, params_.velocity_solver);
  require_converged(rep_l2, step, "gradient projection");

  out.u = u_hat_next;
  for (std::size_t i = 0; i < lifted.size(); ++i) out.u.values[i] -= tau * lifted[i];

  // |w|^2 with w = u_hat - tau grad(dp), evaluated exactly for the broken field.
  const double w2 = quadratic_form(mv_, u_hat_next.values) -
                    2.0 * tau * dot(grad_load, u_hat_next.values) +
                    tau * tau * quadratic_form(a1_, dp);
  out.projection_defect = w2 - quadratic_form(mv_, out.u.values);
  return out;
}

DiagRecord Scheme::initial_record(const State& s) const {
  DiagRecord d = snapshot(s, params_.tau, m1_, a1_, mv_);
  d.xi = 1.0;
  return d;
}

StepResult Scheme::advance(const State& s) const {
  const double t_next = (s.step + 1) * params_.tau;
  StepResult out;
  auto conc = step_concentrations(s, t_next);
  auto pot = step_potential(conc.c1, conc.c2, &s.phi);
  require_converged(pot.report, s.step + 1, "potential");
  out.warnings.insert(out.warnings.end(), pot.warnings.begin(), pot.warnings.end());

  const auto split = compute_velocity_split(s, t_next);
  auto xi = solve_xi(s, split, conc.c1, conc.c2, pot.phi, t_next);
  out.warnings.insert(out.warnings.end(), xi.warnings.begin(), xi.warnings.end());

  FieldVector u_hat = split.u1;
  for (std::size_t i = 0; i < u_hat.size(); ++i) u_hat.values[i] += xi.xi * split.u2.values[i];
  auto proj = pressure_projection(u_hat, s);

  State& n = out.state;
  n.c1 = std::move(conc.c1);
  n.c2 = std::move(conc.c2);
  n.phi = std::move(pot.phi);
  n.u_hat = std::move(u_hat);
  n.u = std::move(proj.u);
  n.p = std::move(proj.p);
  n.r = xi.r_next;
  n.step = s.step + 1;
  n.time = t_next;

  const double tau = params_.tau;
  DiagRecord& d = out.diag;
  d = snapshot(n, tau, m1_, a1_, mv_);
  d.xi = xi.xi;
  d.diss_u = tau * quadratic_form(av_, n.u_hat.values);
  std::vector<double> rho(n.c1.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = n.c1.values[i] - n.c2.values[i];
  d.diss_charge = tau * quadratic_form(m1_, rho);
  d.diss_drift = tau * integrate_drift_dissipation(n.c1, n.c2, n.phi);
  std::vector<double> du(n.u_hat.size());
  for (std::size_t i = 0; i < du.size(); ++i) du[i] = n.u_hat.values[i] - s.u.values[i];
  d.diss_numerical = 0.5 * quadratic_form(mv_, du) + (n.r - s.r) * (n.r - s.r) +
                     0.5 * proj.projection_defect;
  for (auto& w : out.warnings) w = "step " + std::to_string(n.step) + ": " + w;
  return out;
}

}  // namespace nspnp
