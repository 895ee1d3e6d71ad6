#include "nspnp/diagnostics.hpp"

#include <algorithm>
#include <stdexcept>

namespace nspnp {

double mass(const FieldVector& c, const CsrMatrix& m) {
  if (c.size() != m.rows()) throw std::invalid_argument("mass: dimension mismatch");
  const auto mc = spmv(m, c.values);
  double total = 0.0;
  for (double v : mc) total += v;
  return total;
}

double quadratic_form(const CsrMatrix& a, std::span<const double> x) {
  const auto ax = spmv(a, x);
  return dot(x, ax);
}

std::pair<double, double> extrema(const FieldVector& c) {
  if (c.values.empty()) return {0.0, 0.0};
  const auto [lo, hi] = std::minmax_element(c.values.begin(), c.values.end());
  return {*lo, *hi};
}

double discrete_energy(const State& s, double tau, const CsrMatrix& vel_mass,
                       const CsrMatrix& p1_stiffness) {
  return 0.5 * quadratic_form(vel_mass, s.u.values) +
         0.5 * tau * tau * quadratic_form(p1_stiffness, s.p.values) + s.r * s.r;
}

double original_energy(const State& s, const CsrMatrix& vel_mass, const CsrMatrix& p1_stiffness) {
  return 0.5 * quadratic_form(vel_mass, s.u.values) +
         0.5 * quadratic_form(p1_stiffness, s.phi.values);
}

DiagRecord snapshot(const State& s, double tau, const CsrMatrix& p1_mass,
                    const CsrMatrix& p1_stiffness, const CsrMatrix& vel_mass) {
  DiagRecord d;
  d.step = s.step;
  d.time = s.time;
  d.mass_c1 = mass(s.c1, p1_mass);
  d.mass_c2 = mass(s.c2, p1_mass);
  std::tie(d.min_c1, d.max_c1) = extrema(s.c1);
  std::tie(d.min_c2, d.max_c2) = extrema(s.c2);
  d.energy_h = discrete_energy(s, tau, vel_mass, p1_stiffness);
  d.energy_orig = original_energy(s, vel_mass, p1_stiffness);
  d.r = s.r;
  return d;
}

}  // namespace nspnp
