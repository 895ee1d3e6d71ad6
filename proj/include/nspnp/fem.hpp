#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "nspnp/mesh.hpp"
#include "nspnp/sparse.hpp"

namespace nspnp {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Gradient of a vector field: row = component, column = derivative.
struct Mat2 {
  double xx = 0.0;  // d u_x / dx
  double xy = 0.0;  // d u_x / dy
  double yx = 0.0;  // d u_y / dx
  double yy = 0.0;  // d u_y / dy
};

using ScalarFunction = std::function<double(double x, double y, double t)>;
using VectorFunction = std::function<Vec2(double x, double y, double t)>;

struct ScalarExact {
  ScalarFunction value;
  std::function<Vec2(double, double, double)> gradient;
};

struct VectorExact {
  VectorFunction value;
  std::function<Mat2(double, double, double)> gradient;
};

/// Quadrature on a triangle in barycentric coordinates. The integral over an
/// element T is |T| * sum_q w_q f(x_q), weights summing to one.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;

  /// 7-point rule, exact for total degree <= 5.
  static const QuadratureRule& degree5();
};

enum class ElementKind { P1, P2 };

/// Basis values and gradients with respect to the reference coordinates
/// (xi, eta), where lambda1 = xi, lambda2 = eta, lambda0 = 1 - xi - eta.
/// P2 ordering: three vertex functions, then midpoints of the edges opposite
/// vertex 0, 1, 2.
struct ShapeValues {
  int count = 0;
  std::array<double, 6> values{};
  std::array<std::array<double, 2>, 6> ref_gradients{};
};

ShapeValues shape_eval(ElementKind kind, const std::array<double, 3>& bary);

/// A finite element space over a mesh with a fixed dof numbering.
/// P2Vector is component-blocked: dof c * n_nodes + k is component c of node k.
class FunctionSpace {
 public:
  FunctionSpace(std::shared_ptr<const StructuredTriMesh> mesh, SpaceKind kind);

  SpaceKind kind() const { return kind_; }
  const StructuredTriMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const StructuredTriMesh>& mesh_ptr() const { return mesh_; }

  std::size_t dof_count() const { return dof_count_; }
  /// Scalar nodes (vertices for P1, P2 nodes otherwise).
  std::size_t node_count() const { return node_count_; }
  int dofs_per_element() const { return dofs_per_element_; }
  ElementKind element_kind() const { return kind_ == SpaceKind::P1 ? ElementKind::P1 : ElementKind::P2; }

  std::span<const int> element_dofs(std::size_t t) const {
    return {element_dofs_.data() + t * static_cast<std::size_t>(dofs_per_element_),
            static_cast<std::size_t>(dofs_per_element_)};
  }
  Point2 node_coords(std::size_t node) const;

  /// Zero matrix with this space's sparsity pattern (block diagonal for P2Vector).
  const CsrMatrix& pattern() const { return pattern_; }

 private:
  std::shared_ptr<const StructuredTriMesh> mesh_;
  SpaceKind kind_;
  std::size_t node_count_ = 0;
  std::size_t dof_count_ = 0;
  int dofs_per_element_ = 0;
  std::vector<int> element_dofs_;
  CsrMatrix pattern_;
};

/// Discrete field: coefficient vector over a function space.
struct FieldVector {
  std::shared_ptr<const FunctionSpace> space;
  std::vector<double> values;

  FieldVector() = default;
  explicit FieldVector(std::shared_ptr<const FunctionSpace> s)
      : space(std::move(s)), values(space->dof_count(), 0.0) {}
  FieldVector(std::shared_ptr<const FunctionSpace> s, std::vector<double> v);

  std::size_t size() const { return values.size(); }
};

/// The three spaces used by the scheme on one mesh.
struct Discretization {
  std::shared_ptr<const StructuredTriMesh> mesh;
  std::shared_ptr<const FunctionSpace> p1;
  std::shared_ptr<const FunctionSpace> p2;
  std::shared_ptr<const FunctionSpace> p2vec;

  static Discretization create(const Rect& bounds, int nx, int ny);
};

struct VectorOperators {
  CsrMatrix mass;
  CsrMatrix stiffness;
};

CsrMatrix assemble_mass(const FunctionSpace& space);
CsrMatrix assemble_stiffness(const FunctionSpace& space);
VectorOperators assemble_vector_operators(const FunctionSpace& space);

/// K[i][j] = -int lambda_j (u . grad theta_i), u on P2Vector, trial/test P1.
CsrMatrix assemble_convection(const FieldVector& u, const FunctionSpace& p1);

/// D[i][j] = sign * int lambda_j grad(phi) . grad(theta_i), phi on P1.
CsrMatrix assemble_drift(const FieldVector& phi, double sign, const FunctionSpace& p1);

/// B[i][j] = int q_i div(v_j); rows pressure (P1), columns velocity (P2Vector).
CsrMatrix assemble_div_coupling(const FunctionSpace& vel, const FunctionSpace& pres);

/// G[j][i] = int grad(q_i) . v_j; rows velocity, columns pressure.
CsrMatrix assemble_gradient_coupling(const FunctionSpace& vel, const FunctionSpace& pres);

/// Load vector int f theta_i on a scalar space.
FieldVector assemble_load(std::shared_ptr<const FunctionSpace> space, const ScalarFunction& f,
                          double t);
/// Load vector int f . v_j on the P2Vector space.
FieldVector assemble_load(std::shared_ptr<const FunctionSpace> space, const VectorFunction& f,
                          double t);

/// int (u . grad u) . v_j for u on P2Vector.
std::vector<double> assemble_advection_load(const FieldVector& u);

/// int (c1 - c2) grad(phi) . v_j, concentrations and potential on P1.
std::vector<double> assemble_electric_force_load(const FieldVector& c1, const FieldVector& c2,
                                                 const FieldVector& phi,
                                                 const FunctionSpace& vel);

/// int (c1 + c2) |grad phi|^2.
double integrate_drift_dissipation(const FieldVector& c1, const FieldVector& c2,
                                   const FieldVector& phi);

/// int f over the domain, degree-5 rule.
double integrate(const StructuredTriMesh& mesh, const ScalarFunction& f, double t);

FieldVector interpolate(std::shared_ptr<const FunctionSpace> space, const ScalarFunction& f,
                        double t);
FieldVector interpolate(std::shared_ptr<const FunctionSpace> space, const VectorFunction& f,
                        double t);

struct ErrorNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double h1 = 0.0;
};

ErrorNorms error_norms(const FieldVector& field, const ScalarExact& exact, double t);
ErrorNorms error_norms(const FieldVector& field, const VectorExact& exact, double t);
/// Norms of field - reference, both on the same space.
ErrorNorms difference_norms(const FieldVector& field, const FieldVector& reference);

/// Replace each listed row by an identity row with rhs = value, moving the
/// eliminated column entries of the other rows to the right-hand side.
void apply_dirichlet(CsrMatrix& a, std::span<double> rhs, std::span<const int> dofs, double value);
/// Per-dof values: rows dofs[k] pinned to values[k].
void apply_dirichlet(CsrMatrix& a, std::span<double> rhs, std::span<const int> dofs,
                     std::span<const double> values);

}  // namespace nspnp
