#pragma once

#include <utility>

#include "nspnp/state.hpp"

namespace nspnp {

/// 1^T M c.
double mass(const FieldVector& c, const CsrMatrix& m);

/// x^T A x.
double quadratic_form(const CsrMatrix& a, std::span<const double> x);

/// Nodal (min, max).
std::pair<double, double> extrema(const FieldVector& c);

/// 1/2 |u|^2 + tau^2/2 |grad p|^2 + r^2.
double discrete_energy(const State& s, double tau, const CsrMatrix& vel_mass,
                       const CsrMatrix& p1_stiffness);

/// 1/2 |u|^2 + 1/2 |grad phi|^2.
double original_energy(const State& s, const CsrMatrix& vel_mass, const CsrMatrix& p1_stiffness);

/// Fills time, masses, extrema, energies and r from the state; dissipation
/// terms and xi are left for the caller.
DiagRecord snapshot(const State& s, double tau, const CsrMatrix& p1_mass,
                    const CsrMatrix& p1_stiffness, const CsrMatrix& vel_mass);

}  // namespace nspnp
