#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nspnp/diagnostics.hpp"
#include "nspnp/mms.hpp"
#include "support/oracles.hpp"

using namespace nspnp;

namespace {

State zero_state(const Discretization& d, double r) {
  State s;
  s.c1 = FieldVector(d.p1);
  s.c2 = FieldVector(d.p1);
  s.phi = FieldVector(d.p1);
  s.p = FieldVector(d.p1);
  s.u = FieldVector(d.p2vec);
  s.u_hat = FieldVector(d.p2vec);
  s.r = r;
  return s;
}

}  // namespace

TEST_CASE("mass") {
  const auto d = Discretization::create({0, 1, 0, 1}, 5, 5);
  const auto m = assemble_mass(*d.p1);
  CHECK(mass(interpolate(d.p1, [](double, double, double) { return 1.0; }, 0.0), m) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mass(FieldVector(d.p1), m) == 0.0);
  CHECK_THROWS(mass(FieldVector(d.p2), m));

  const auto c1 = make_case(CaseTag::Example3).initial_c1;
  auto defect = [&](int n) {
    const auto dn = Discretization::create({0, 1, 0, 1}, n, n);
    return std::abs(mass(interpolate(dn.p1, c1, 0.0), assemble_mass(*dn.p1)) - 1.0);
  };
  // Within h^2; the nodal rule is in fact exact for this symmetric profile.
  CHECK(defect(10) <= 1e-2);
  CHECK(defect(7) <= 1e-12);
}

TEST_CASE("extrema are nodal") {
  const auto d = Discretization::create({0, 1, 0, 1}, 3, 3);
  FieldVector f(d.p1);
  f.values[4] = -0.25;
  f.values[7] = 2.0;
  const auto [lo, hi] = extrema(f);
  CHECK(lo == -0.25);
  CHECK(hi == 2.0);
}

TEST_CASE("energies") {
  const auto d = Discretization::create({0, 1, 0, 1}, 4, 4);
  const auto mv = assemble_vector_operators(*d.p2vec).mass;
  const auto a1 = assemble_stiffness(*d.p1);
  const auto m1 = assemble_mass(*d.p1);
  auto s = zero_state(d, std::sqrt(5.0));
  CHECK(discrete_energy(s, 0.1, mv, a1) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(original_energy(s, mv, a1) == 0.0);

  s.u = interpolate(d.p2vec, [](double x, double y, double) { return Vec2{y, -x}; }, 0.0);
  s.p = interpolate(d.p1, [](double x, double, double) { return x - 0.5; }, 0.0);
  s.phi = interpolate(d.p1, [](double, double y, double) { return 2 * y - 1; }, 0.0);
  s.r = 3.0;
  const double tau = 0.2;
  // Closed forms: |u|^2 = int x^2 + y^2 = 2/3, |grad p|^2 = 1, |grad phi|^2 = 4.
  CHECK(discrete_energy(s, tau, mv, a1) ==
        doctest::Approx(0.5 * 2.0 / 3 + 0.5 * tau * tau * 1.0 + 9.0).epsilon(1e-13));
  CHECK(original_energy(s, mv, a1) == doctest::Approx(1.0 / 3 + 2.0).epsilon(1e-13));

  const auto rec = snapshot(s, tau, m1, a1, mv);
  CHECK(rec.energy_h == doctest::Approx(discrete_energy(s, tau, mv, a1)).epsilon(1e-15));
  CHECK(rec.energy_h >= rec.r * rec.r);
  CHECK(rec.mass_c1 == 0.0);
  CHECK(rec.r == 3.0);
}

TEST_CASE("quadratic form") {
  const auto a = oracle::from_dense({{2, 1}, {1, 3}});
  const std::vector<double> x{1.0, -2.0};
  CHECK(quadratic_form(a, x) == doctest::Approx(2 - 4 + 12));
}
