#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nspnp/diagnostics.hpp"
#include "nspnp/state.hpp"

namespace nspnp {

/// Right-hand sides of the inhomogeneous equations. Any empty member is zero.
struct SourceTerms {
  ScalarFunction f_c1;
  ScalarFunction f_c2;
  VectorFunction f_u;
};

/// Problem data beyond the initial fields.
struct ProblemData {
  SourceTerms sources;
  /// Velocity Dirichlet data; empty means no-slip.
  VectorFunction velocity_boundary;
};

/// Tentative velocity split u_hat = u1 + xi * u2.
struct VelocitySplit {
  FieldVector u1;
  FieldVector u2;
  /// int (u^n . grad u^n + (c1^n - c2^n) grad phi^n) . v_j, the xi-scaled load.
  std::vector<double> explicit_load;
};

/// Coefficients of a xi^2 - b xi + c = 0.
struct SplitCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

struct XiSolution {
  double xi = 1.0;
  double r_next = 1.0;
  double energy_next = 1.0;  // E(phi^{n+1})
  SplitCoefficients coeffs;
  std::vector<std::string> warnings;
};

/// Root of a xi^2 - b xi + c = 0 closest to one, with clamp/fallback for a
/// negative discriminant or a vanishing leading coefficient.
double solve_sav_quadratic(const SplitCoefficients& k, std::vector<std::string>* warnings);

struct ConcentrationUpdate {
  FieldVector c1;
  FieldVector c2;
  SolveReport report_c1;
  SolveReport report_c2;
};

struct PotentialUpdate {
  FieldVector phi;
  /// |mean of rhs| / |rhs| before projection.
  double rhs_mean_deviation = 0.0;
  SolveReport report;
  std::vector<std::string> warnings;
};

struct ProjectionUpdate {
  FieldVector p;
  FieldVector u;
  /// |w|^2 - |u|^2 with w = u_hat - tau grad(p^{n+1} - p^n) before lifting.
  double projection_defect = 0.0;
};

struct StepResult {
  State state;
  DiagRecord diag;
  std::vector<std::string> warnings;
};

class StepError : public std::runtime_error {
 public:
  StepError(int step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

/// First-order decoupled SAV pressure-correction integrator on P1 / Taylor-Hood
/// spaces. Constant operators are assembled once at construction.
class Scheme {
 public:
  Scheme(Discretization disc, SchemeParams params, ProblemData data = {});

  const Discretization& discretization() const { return disc_; }
  const SchemeParams& params() const { return params_; }

  /// Nodal interpolation of the initial fields, zero-mean Neumann solve for
  /// phi^0, r^0 = sqrt(E(phi^0)). Warnings about negative initial
  /// concentrations go to `warnings` when non-null.
  State init_state(const ScalarFunction& c1_0, const ScalarFunction& c2_0,
                   const VectorFunction& u_0, const ScalarFunction& p_0,
                   std::vector<std::string>* warnings = nullptr) const;

  ConcentrationUpdate step_concentrations(const State& s, double t_next) const;
  /// `guess` (typically phi^n) only seeds the iterative solve.
  PotentialUpdate step_potential(const FieldVector& c1_next, const FieldVector& c2_next,
                                 const FieldVector* guess = nullptr) const;
  VelocitySplit compute_velocity_split(const State& s, double t_next) const;
  XiSolution solve_xi(const State& s, const VelocitySplit& split, const FieldVector& c1_next,
                      const FieldVector& c2_next, const FieldVector& phi_next,
                      double t_next) const;
  ProjectionUpdate pressure_projection(const FieldVector& u_hat_next, const State& s) const;

  /// One full time step.
  StepResult advance(const State& s) const;

  /// Relative algebraic residual of the unsplit tentative-velocity equation
  /// at u_hat = u1 + xi u2, measured over the free (non-Dirichlet) rows.
  double momentum_residual(const State& s, const VelocitySplit& split, double xi,
                           double t_next) const;

  /// E(phi) = 1/2 phi^T A phi + C0.
  double partial_energy(const FieldVector& phi) const;

  DiagRecord initial_record(const State& s) const;

  const CsrMatrix& p1_mass() const { return m1_; }
  const CsrMatrix& p1_stiffness() const { return a1_; }
  const CsrMatrix& vel_mass() const { return mv_; }
  const CsrMatrix& vel_stiffness() const { return av_; }
  const CsrMatrix& div_coupling() const { return b_; }
  const std::vector<int>& velocity_boundary_dofs() const { return vel_bdofs_; }

 private:
  std::vector<double> momentum_rhs_u1(const State& s, double t_next) const;
  double data_time(double t_next) const;
  std::vector<double> boundary_values(double t) const;
  void impose_boundary(std::vector<double>& rhs, const std::vector<double>& g) const;
  FieldVector solve_poisson(std::vector<double> rhs, const FieldVector* guess,
                            SolveReport* report) const;

  Discretization disc_;
  SchemeParams params_;
  ProblemData data_;

  CsrMatrix m1_;
  CsrMatrix a1_;
  CsrMatrix mv_;
  CsrMatrix av_;
  CsrMatrix b_;
  CsrMatrix g_;
  std::vector<double> p1_weights_;  // M1 * 1, so weights . f = int f
  std::vector<int> vel_bdofs_;
  CsrMatrix vel_system_;      // Mv / tau + Av
  CsrMatrix vel_system_bc_;   // same with Dirichlet rows/columns eliminated
  CsrMatrix vel_mass_bc_;     // Mv with Dirichlet rows/columns eliminated
};

}  // namespace nspnp
