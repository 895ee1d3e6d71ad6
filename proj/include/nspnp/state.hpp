#pragma once

#include "nspnp/fem.hpp"
#include "nspnp/sparse.hpp"

namespace nspnp {

/// Time level at which source terms and velocity boundary data are sampled
/// for the step t^n -> t^{n+1}: Next = t^{n+1}, Current = t^n.
enum class DataTime { Next, Current };

struct SchemeParams {
  double tau = 0.01;
  /// Shift in E(phi) = 1/2 |grad phi|^2 + C0; must keep E >= 1.
  double c0 = 1.0;
  double t_final = 1.0;
  SolverOptions concentration_solver{1e-10, 20000, true};
  SolverOptions poisson_solver{1e-10, 20000, true};
  SolverOptions velocity_solver{1e-10, 20000, true};
  bool sources_enabled = false;
  DataTime data_time = DataTime::Next;

  /// Throws std::invalid_argument on tau <= 0, C0 <= 0, or t_final not an
  /// integer multiple of tau.
  void validate() const;
  int num_steps() const;
};

/// Discrete fields at one time level.
struct State {
  FieldVector c1;
  FieldVector c2;
  FieldVector phi;
  FieldVector u_hat;
  FieldVector u;
  FieldVector p;
  double r = 1.0;
  int step = 0;
  double time = 0.0;
};

/// Per-step structure indicators. Dissipation terms carry their factor tau.
struct DiagRecord {
  int step = 0;
  double time = 0.0;
  double mass_c1 = 0.0;
  double mass_c2 = 0.0;
  double min_c1 = 0.0;
  double max_c1 = 0.0;
  double min_c2 = 0.0;
  double max_c2 = 0.0;
  double energy_h = 0.0;
  double energy_orig = 0.0;
  double diss_u = 0.0;       // tau |grad u_hat|^2
  double diss_charge = 0.0;  // tau |c1 - c2|^2
  double diss_drift = 0.0;   // tau int (c1 + c2) |grad phi|^2
  /// 1/2 |u_hat - u^n|^2 + (r^{n+1} - r^n)^2 + 1/2 (velocity projection defect).
  double diss_numerical = 0.0;
  double xi = 1.0;
  double r = 0.0;
};

}  // namespace nspnp
