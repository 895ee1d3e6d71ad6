#include "nspnp/fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nspnp {

const QuadratureRule& QuadratureRule::degree5() {
  static const QuadratureRule rule = [] {
    const double s = std::sqrt(15.0);
    const double a1 = (9.0 - 2.0 * s) / 21.0;
    const double b1 = (6.0 + s) / 21.0;
    const double w1 = (155.0 + s) / 1200.0;
    const double a2 = (9.0 + 2.0 * s) / 21.0;
    const double b2 = (6.0 - s) / 21.0;
    const double w2 = (155.0 - s) / 1200.0;
    QuadratureRule q;
    q.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
                {a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1},
                {a2, b2, b2}, {b2, a2, b2}, {b2, b2, a2}};
    q.weights = {9.0 / 40.0, w1, w1, w1, w2, w2, w2};
    return q;
  }();
  return rule;
}

ShapeValues shape_eval(ElementKind kind, const std::array<double, 3>& bary) {
  const double sum = bary[0] + bary[1] + bary[2];
  if (std::abs(sum - 1.0) > 1e-12 || bary[0] < -1e-12 || bary[1] < -1e-12 || bary[2] < -1e-12) {
    throw std::invalid_argument("shape_eval: invalid barycentric point");
  }
  static constexpr std::array<std::array<double, 2>, 3> dl{{{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}}};
  ShapeValues out;
  if (kind == ElementKind::P1) {
    out.count = 3;
    for (int i = 0; i < 3; ++i) {
      out.values[i] = bary[i];
      out.ref_gradients[i] = dl[i];
    }
    return out;
  }
  out.count = 6;
  for (int i = 0; i < 3; ++i) {
    const double l = bary[i];
    out.values[i] = l * (2.0 * l - 1.0);
    out.ref_gradients[i] = {(4.0 * l - 1.0) * dl[i][0], (4.0 * l - 1.0) * dl[i][1]};
  }
  for (int k = 0; k < 3; ++k) {
    const int i = (k + 1) % 3;
    const int j = (k + 2) % 3;
    out.values[3 + k] = 4.0 * bary[i] * bary[j];
    out.ref_gradients[3 + k] = {4.0 * (bary[j] * dl[i][0] + bary[i] * dl[j][0]),
                                4.0 * (bary[j] * dl[i][1] + bary[i] * dl[j][1])};
  }
  return out;
}

namespace {

struct Tabulation {
  std::vector<ShapeValues> p1;
  std::vector<ShapeValues> p2;
};

const Tabulation& tabulation() {
  static const Tabulation tab = [] {
    Tabulation t;
    for (const auto& pt : QuadratureRule::degree5().points) {
      t.p1.push_back(shape_eval(ElementKind::P1, pt));
      t.p2.push_back(shape_eval(ElementKind::P2, pt));
    }
    return t;
  }();
  return tab;
}

struct ElementGeometry {
  Point2 origin;
  double j00, j01, j10, j11;
  double det;
  double area;

  ElementGeometry(const StructuredTriMesh& mesh, std::size_t t) {
    const auto& tri = mesh.triangles()[t];
    const auto& v = mesh.vertices();
    origin = v[tri[0]];
    j00 = v[tri[1]].x - origin.x;
    j01 = v[tri[2]].x - origin.x;
    j10 = v[tri[1]].y - origin.y;
    j11 = v[tri[2]].y - origin.y;
    det = j00 * j11 - j01 * j10;
    area = 0.5 * det;
  }

  Point2 map(const std::array<double, 3>& bary) const {
    return {origin.x + j00 * bary[1] + j01 * bary[2], origin.y + j10 * bary[1] + j11 * bary[2]};
  }

  Vec2 gradient(const std::array<double, 2>& g) const {
    return {(j11 * g[0] - j10 * g[1]) / det, (-j01 * g[0] + j00 * g[1]) / det};
  }
};

// Physical basis gradients at every quadrature point of one element.
struct ElementBasis {
  int count;
  const std::vector<ShapeValues>* shapes;
  std::vector<std::array<Vec2, 6>> grads;

  ElementBasis(const ElementGeometry& geo, ElementKind kind) {
    shapes = (kind == ElementKind::P1) ? &tabulation().p1 : &tabulation().p2;
    count = (kind == ElementKind::P1) ? 3 : 6;
    grads.resize(shapes->size());
    for (std::size_t q = 0; q < shapes->size(); ++q) {
      for (int a = 0; a < count; ++a) {
        grads[q][a] = geo.gradient((*shapes)[q].ref_gradients[a]);
      }
    }
  }

  double value(std::size_t q, int a) const { return (*shapes)[q].values[a]; }
};

void require_kind(const FunctionSpace& s, SpaceKind kind, const char* who) {
  if (s.kind() != kind) {
    throw std::invalid_argument(std::string(who) + ": wrong function space kind");
  }
}

void require_same_mesh(const FunctionSpace& a, const FunctionSpace& b, const char* who) {
  if (&a.mesh() != &b.mesh()) {
    throw std::invalid_argument(std::string(who) + ": spaces live on different meshes");
  }
}

// Scalar value / gradient of a field at quadrature point q of element t.
double eval_scalar(const FieldVector& f, std::size_t t, const ElementBasis& basis, std::size_t q) {
  const auto dofs = f.space->element_dofs(t);
  double v = 0.0;
  for (int a = 0; a < basis.count; ++a) v += f.values[dofs[a]] * basis.value(q, a);
  return v;
}

Vec2 eval_scalar_gradient(const FieldVector& f, std::size_t t, const ElementBasis& basis,
                          std::size_t q) {
  const auto dofs = f.space->element_dofs(t);
  Vec2 g;
  for (int a = 0; a < basis.count; ++a) {
    g.x += f.values[dofs[a]] * basis.grads[q][a].x;
    g.y += f.values[dofs[a]] * basis.grads[q][a].y;
  }
  return g;
}

// Vector field on P2Vector: element dofs 0..5 are x, 6..11 are y.
Vec2 eval_vector(const FieldVector& f, std::size_t t, const ElementBasis& basis, std::size_t q) {
  const auto dofs = f.space->element_dofs(t);
  Vec2 v;
  for (int a = 0; a < 6; ++a) {
    v.x += f.values[dofs[a]] * basis.value(q, a);
    v.y += f.values[dofs[6 + a]] * basis.value(q, a);
  }
  return v;
}

Mat2 eval_vector_gradient(const FieldVector& f, std::size_t t, const ElementBasis& basis,
                          std::size_t q) {
  const auto dofs = f.space->element_dofs(t);
  Mat2 g;
  for (int a = 0; a < 6; ++a) {
    const double ux = f.values[dofs[a]];
    const double uy = f.values[dofs[6 + a]];
    g.xx += ux * basis.grads[q][a].x;
    g.xy += ux * basis.grads[q][a].y;
    g.yx += uy * basis.grads[q][a].x;
    g.yy += uy * basis.grads[q][a].y;
  }
  return g;
}

}  // namespace

FunctionSpace::FunctionSpace(std::shared_ptr<const StructuredTriMesh> mesh, SpaceKind kind)
    : mesh_(std::move(mesh)), kind_(kind) {
  if (!mesh_) throw std::invalid_argument("FunctionSpace: null mesh");
  const std::size_t nt = mesh_->num_triangles();
  switch (kind_) {
    case SpaceKind::P1:
      node_count_ = mesh_->num_vertices();
      dof_count_ = node_count_;
      dofs_per_element_ = 3;
      break;
    case SpaceKind::P2Scalar:
      node_count_ = mesh_->num_p2_nodes();
      dof_count_ = node_count_;
      dofs_per_element_ = 6;
      break;
    case SpaceKind::P2Vector:
      node_count_ = mesh_->num_p2_nodes();
      dof_count_ = 2 * node_count_;
      dofs_per_element_ = 12;
      break;
  }
  element_dofs_.reserve(nt * static_cast<std::size_t>(dofs_per_element_));
  for (std::size_t t = 0; t < nt; ++t) {
    if (kind_ == SpaceKind::P1) {
      const auto& tri = mesh_->triangles()[t];
      element_dofs_.insert(element_dofs_.end(), tri.begin(), tri.end());
    } else {
      const auto nodes = mesh_->p2_nodes(t);
      element_dofs_.insert(element_dofs_.end(), nodes.begin(), nodes.end());
      if (kind_ == SpaceKind::P2Vector) {
        for (int n : nodes) element_dofs_.push_back(n + static_cast<int>(node_count_));
      }
    }
  }

  if (kind_ == SpaceKind::P2Vector) {
    // Components never couple in the vector mass/stiffness blocks.
    std::vector<std::array<int, 6>> blocks;
    blocks.reserve(2 * nt);
    for (std::size_t t = 0; t < nt; ++t) {
      const auto d = element_dofs(t);
      std::array<int, 6> bx{}, by{};
      for (int a = 0; a < 6; ++a) {
        bx[a] = d[a];
        by[a] = d[6 + a];
      }
      blocks.push_back(bx);
      blocks.push_back(by);
    }
    pattern_ = CsrMatrix::from_element_pattern(dof_count_, dof_count_, blocks, blocks);
  } else {
    std::vector<std::span<const int>> lists(nt);
    for (std::size_t t = 0; t < nt; ++t) lists[t] = element_dofs(t);
    pattern_ = CsrMatrix::from_element_pattern(dof_count_, dof_count_, lists, lists);
  }
}

Point2 FunctionSpace::node_coords(std::size_t node) const {
  return kind_ == SpaceKind::P1 ? mesh_->vertices().at(node) : mesh_->p2_node_coords(node);
}

FieldVector::FieldVector(std::shared_ptr<const FunctionSpace> s, std::vector<double> v)
    : space(std::move(s)), values(std::move(v)) {
  if (!space || values.size() != space->dof_count()) {
    throw std::invalid_argument("FieldVector: length does not match space");
  }
}

Discretization Discretization::create(const Rect& bounds, int nx, int ny) {
  Discretization d;
  d.mesh = std::make_shared<const StructuredTriMesh>(bounds, nx, ny);
  d.p1 = std::make_shared<const FunctionSpace>(d.mesh, SpaceKind::P1);
  d.p2 = std::make_shared<const FunctionSpace>(d.mesh, SpaceKind::P2Scalar);
  d.p2vec = std::make_shared<const FunctionSpace>(d.mesh, SpaceKind::P2Vector);
  return d;
}

namespace {

template <class Kernel>
CsrMatrix assemble_scalar_bilinear(const FunctionSpace& space, Kernel kernel) {
  CsrMatrix out = space.pattern();
  const auto& quad = QuadratureRule::degree5();
  const auto& mesh = space.mesh();
  const bool vector = space.kind() == SpaceKind::P2Vector;
  const int n = vector ? 6 : space.dofs_per_element();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geo(mesh, t);
    const ElementBasis basis(geo, space.element_kind());
    std::array<std::array<double, 6>, 6> local{};
    for (std::size_t q = 0; q < quad.weights.size(); ++q) {
      const double w = quad.weights[q] * geo.area;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          local[a][b] += w * kernel(basis, q, a, b);
        }
      }
    }
    const auto dofs = space.element_dofs(t);
    const int blocks = vector ? 2 : 1;
    for (int c = 0; c < blocks; ++c) {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          out.add(dofs[c * n + a], dofs[c * n + b], local[a][b]);
        }
      }
    }
  }
  return out;
}

}  // namespace

CsrMatrix assemble_mass(const FunctionSpace& space) {
  return assemble_scalar_bilinear(space, [](const ElementBasis& b, std::size_t q, int i, int j) {
    return b.value(q, i) * b.value(q, j);
  });
}

CsrMatrix assemble_stiffness(const FunctionSpace& space) {
  return assemble_scalar_bilinear(space, [](const ElementBasis& b, std::size_t q, int i, int j) {
    return b.grads[q][i].x * b.grads[q][j].x + b.grads[q][i].y * b.grads[q][j].y;
  });
}

VectorOperators assemble_vector_operators(const FunctionSpace& space) {
  require_kind(space, SpaceKind::P2Vector, "assemble_vector_operators");
  return {assemble_mass(space), assemble_stiffness(space)};
}

CsrMatrix assemble_convection(const FieldVector& u, const FunctionSpace& p1) {
  require_kind(p1, SpaceKind::P1, "assemble_convection");
  if (!u.space) throw std::invalid_argument("assemble_convection: velocity has no space");
  require_kind(*u.space, SpaceKind::P2Vector, "assemble_convection");
  require_same_mesh(*u.space, p1, "assemble_convection");
  CsrMatrix out = p1.pattern();
  const auto& quad = QuadratureRule::degree5();
  const auto& mesh = p1.mesh();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geo(mesh, t);
    const ElementBasis b1(geo, ElementKind::P1);
    const ElementBasis b2(geo, ElementKind::P2);
    double local[3][3] = {};
    for (std::size_t q = 0; q < quad.weights.size(); ++q) {
      const double w = quad.weights[q] * geo.area;
      const Vec2 uq = eval_vector(u, t, b2, q);
      for (int i = 0; i < 3; ++i) {
        const double adv = uq.x * b1.grads[q][i].x + uq.y * b1.grads[q][i].y;
        for (int j = 0; j < 3; ++j) {
          local[i][j] -= w * b1.value(q, j) * adv;
        }
      }
    }
    const auto dofs = p1.element_dofs(t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out.add(dofs[i], dofs[j], local[i][j]);
  }
  return out;
}

CsrMatrix assemble_drift(const FieldVector& phi, double sign, const FunctionSpace& p1) {
  require_kind(p1, SpaceKind::P1, "assemble_drift");
  if (!phi.space) throw std::invalid_argument("assemble_drift: potential has no space");
  require_kind(*phi.space, SpaceKind::P1, "assemble_drift");
  require_same_mesh(*phi.space, p1, "assemble_drift");
  CsrMatrix out = p1.pattern();
  const auto& quad = QuadratureRule::degree5();
  const auto& mesh = p1.mesh();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geo(mesh, t);
    const ElementBasis b1(geo, ElementKind::P1);
    double local[3][3] = {};
    for (std::size_t q = 0; q < quad.weights.size(); ++q) {
      const double w = quad.weights[q] * geo.area;
      const Vec2 gphi = eval_scalar_gradient(phi, t, b1, q);
      for (int i = 0; i < 3; ++i) {
        const double flux = gphi.x * b1.grads[q][i].x + gphi.y * b1.grads[q][i].y;
        for (int j = 0; j < 3; ++j) {
          local[i][j] += sign * w * b1.value(q, j) * flux;
        }
      }
    }
    const auto dofs = p1.element_dofs(t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out.add(dofs[i], dofs[j], local[i][j]);
  }
  return out;
}

namespace {

std::vector<std::span<const int>> element_lists(const FunctionSpace& s) {
  std::vector<std::span<const int>> lists(s.mesh().num_triangles());
  for (std::size_t t = 0; t < lists.size(); ++t) lists[t] = s.element_dofs(t);
  return lists;
}

}  // namespace

CsrMatrix assemble_div_coupling(const FunctionSpace& vel, const FunctionSpace& pres) {
  require_kind(vel, SpaceKind::P2Vector, "assemble_div_coupling");
  require_kind(pres, SpaceKind::P1, "assemble_div_coupling");
  require_same_mesh(vel, pres, "assemble_div_coupling");
  CsrMatrix out = CsrMatrix::from_element_pattern(pres.dof_count(), vel.dof_count(),
                                                  element_lists(pres), element_lists(vel));
  const auto& quad = QuadratureRule::degree5();
  const auto& mesh = vel.mesh();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geo(mesh, t);
    const ElementBasis b1(geo, ElementKind::P1);
    const ElementBasis b2(geo, ElementKind::P2);
    double local[3][12] = {};
    for (std::size_t q = 0; q < quad.weights.size(); ++q) {
      const double w = quad.weights[q] * geo.area;
      for (int i = 0; i < 3; ++i) {
        const double qi = b1.value(q, i);
        for (int a = 0; a < 6; ++a) {
          local[i][a] += w * qi * b2.grads[q][a].x;
          local[i][6 + a] += w * qi * b2.grads[q][a].y;
        }
      }
    }
    const auto pd = pres.element_dofs(t);
    const auto vd = vel.element_dofs(t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 12; ++j) out.add(pd[i], vd[j], local[i][j]);
  }
  return out;
}

CsrMatrix assemble_gradient_coupling(const FunctionSpace& vel, const FunctionSpace& pres) {
  require_kind(vel, SpaceKind::P2Vector, "assemble_gradient_coupling");
  require_kind(pres, SpaceKind::P1, "assemble_gradient_coupling");
  require_same_mesh(vel, pres, "assemble_gradient_coupling");
  CsrMatrix out = CsrMatrix::from_element_pattern(vel.dof_count(), pres.dof_count(),
                                                  element_lists(vel), element_lists(pres));
  const auto& quad = QuadratureRule::degree5();
  const auto& mesh = vel.mesh();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geo(mesh, t);
    const ElementBasis b1(geo, ElementKind::P1);
    const ElementBasis b2(geo, ElementKind::P2);
    double local[12][3] = {};
    for (std::size_t q = 0; q < quad.weights.size(); ++q) {
      const double w = quad.weights[q] * geo.area;
      for (int a = 0; a < 6; ++a) {
        const double va = b2.value(q, a);
        for (int i = 0; i < 3; ++i) {
          local[a][i] += w * va * b1.grads[q][i].x;
          local[6 + a][i] += w * va * b1.grads[q][i].y;
        }
      }
    }
    const auto pd = pres.element_dofs(t);
    const auto vd = vel.element_dofs(t);
    for (int j = 0; j < 12; ++j)
      for (int i = 0; i < 3; ++i) out.add(vd[j], pd[i], local[j][i]);
  }
  return out;
}

FieldVector assemble_load(std::shared_ptr<const FunctionSpace> space, const ScalarFunction& f,
                          double t) {
  if (space->kind() == SpaceKind::P2Vector) {
    throw std::invalid_argument("assemble_load: scalar source on a vector space");
  }
  FieldVector out(space);
  const auto& quad = QuadratureRule::degree5();
  const auto& mesh = space->mesh();
  const int n = space->dofs_per_element();
  const auto& shapes =
      space->element_kind() == ElementKind::P1 ? tabulation().p1 : tabulation().p2;
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const ElementGeometry geo(mesh, e);
    const auto dofs = space->element_dofs(e);
    for (std::size_t q = 0; q < quad.weights.size(); ++q) {
      const Point2 x = geo.map(quad.points[q]);
      const double fw = f(x.x, x.y, t) * quad.weights[q] * geo.area;
      for (int a = 0; a < n; ++a) out.values[dofs[a]] += fw * shapes[q].values[a];
    }
  }
  return out;
}

FieldVector assemble_load(std::shared_ptr<const FunctionSpace> space, const VectorFunction& f,
                          double t) {
  require_kind(*space, SpaceKind::P2Vector, "assemble_load");
  FieldVector out(space);
  const auto& quad = QuadratureRule::degree5();
  const auto& mesh = space->mesh();
  const auto& shapes = tabulation().p2;
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const ElementGeometry geo(mesh, e);
    const auto dofs = space->element_dofs(e);
    for (std::size_t q = 0; q < quad.weights.size(); ++q) {
      const Point2 x = geo.map(quad.points[q]);
      const Vec2 fv = f(x.x, x.y, t);
      const double w = quad.weights[q] * geo.area;
      for (int a = 0; a < 6; ++a) {
        out.values[dofs[a]] += w * fv.x * shapes[q].values[a];
        out.values[dofs[6 + a]] += w * fv.y * shapes[q].values[a];
      }
    }
  }
  return out;
}

std::vector<double> assemble_advection_load(const FieldVector& u) {
  require_kind(*u.space, SpaceKind::P2Vector, "assemble_advection_load");
  std::vector<double> out(u.size(), 0.0);
  const auto& quad = QuadratureRule::degree5();
  const auto& mesh = u.space->mesh();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geo(mesh, t);
    const ElementBasis b2(geo, ElementKind::P2);
    const auto dofs = u.space->element_dofs(t);
    for (std::size_t q = 0; q < quad.weights.size(); ++q) {
      const double w = quad.weights[q] * geo.area;
      const Vec2 uq = eval_vector(u, t, b2, q);
      const Mat2 g = eval_vector_gradient(u, t, b2, q);
      const double ax = uq.x * g.xx + uq.y * g.xy;
      const double ay = uq.x * g.yx + uq.y * g.yy;
      for (int a = 0; a < 6; ++a) {
        out[dofs[a]] += w * ax * b2.value(q, a);
        out[dofs[6 + a]] += w * ay * b2.value(q, a);
      }
    }
  }
  return out;
}

std::vector<double> assemble_electric_force_load(const FieldVector& c1, const FieldVector& c2,
                                                 const FieldVector& phi,
                                                 const FunctionSpace& vel) {
  require_kind(vel, SpaceKind::P2Vector, "assemble_electric_force_load");
  require_kind(*phi.space, SpaceKind::P1, "assemble_electric_force_load");
  std::vector<double> out(vel.dof_count(), 0.0);
  const auto& quad = QuadratureRule::degree5();
  const auto& mesh = vel.mesh();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geo(mesh, t);
    const ElementBasis b1(geo, ElementKind::P1);
    const auto& shapes2 = tabulation().p2;
    const auto dofs = vel.element_dofs(t);
    for (std::size_t q = 0; q < quad.weights.size(); ++q) {
      const double w = quad.weights[q] * geo.area;
      const double rho = eval_scalar(c1, t, b1, q) - eval_scalar(c2, t, b1, q);
      const Vec2 g = eval_scalar_gradient(phi, t, b1, q);
      for (int a = 0; a < 6; ++a) {
        out[dofs[a]] += w * rho * g.x * shapes2[q].values[a];
        out[dofs[6 + a]] += w * rho * g.y * shapes2[q].values[a];
      }
    }
  }
  return out;
}

double integrate_drift_dissipation(const FieldVector& c1, const FieldVector& c2,
                                   const FieldVector& phi) {
  const auto& quad = QuadratureRule::degree5();
  const auto& mesh = phi.space->mesh();
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geo(mesh, t);
    const ElementBasis b1(geo, ElementKind::P1);
    for (std::size_t q = 0; q < quad.weights.size(); ++q) {
      const double sum = eval_scalar(c1, t, b1, q) + eval_scalar(c2, t, b1, q);
      const Vec2 g = eval_scalar_gradient(phi, t, b1, q);
      total += quad.weights[q] * geo.area * sum * (g.x * g.x + g.y * g.y);
    }
  }
  return total;
}

double integrate(const StructuredTriMesh& mesh, const ScalarFunction& f, double t) {
  const auto& quad = QuadratureRule::degree5();
  double total = 0.0;
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const ElementGeometry geo(mesh, e);
    double local = 0.0;
    for (std::size_t q = 0; q < quad.weights.size(); ++q) {
      const Point2 x = geo.map(quad.points[q]);
      local += quad.weights[q] * f(x.x, x.y, t);
    }
    total += geo.area * local;
  }
  return total;
}

FieldVector interpolate(std::shared_ptr<const FunctionSpace> space, const ScalarFunction& f,
                        double t) {
  if (space->kind() == SpaceKind::P2Vector) {
    throw std::invalid_argument("interpolate: scalar function on a vector space");
  }
  FieldVector out(space);
  for (std::size_t k = 0; k < space->node_count(); ++k) {
    const Point2 x = space->node_coords(k);
    out.values[k] = f(x.x, x.y, t);
  }
  return out;
}

FieldVector interpolate(std::shared_ptr<const FunctionSpace> space, const VectorFunction& f,
                        double t) {
  require_kind(*space, SpaceKind::P2Vector, "interpolate");
  FieldVector out(space);
  const std::size_t n = space->node_count();
  for (std::size_t k = 0; k < n; ++k) {
    const Point2 x = space->node_coords(k);
    const Vec2 v = f(x.x, x.y, t);
    out.values[k] = v.x;
    out.values[n + k] = v.y;
  }
  return out;
}

ErrorNorms error_norms(const FieldVector& field, const ScalarExact& exact, double t) {
  if (field.space->kind() == SpaceKind::P2Vector) {
    throw std::invalid_argument("error_norms: scalar exact field for a vector space");
  }
  const auto& quad = QuadratureRule::degree5();
  const auto& mesh = field.space->mesh();
  double l2 = 0.0;
  double semi = 0.0;
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const ElementGeometry geo(mesh, e);
    const ElementBasis basis(geo, field.space->element_kind());
    for (std::size_t q = 0; q < quad.weights.size(); ++q) {
      const double w = quad.weights[q] * geo.area;
      const Point2 x = geo.map(quad.points[q]);
      const double d = eval_scalar(field, e, basis, q) - exact.value(x.x, x.y, t);
      l2 += w * d * d;
      if (exact.gradient) {
        const Vec2 gh = eval_scalar_gradient(field, e, basis, q);
        const Vec2 ge = exact.gradient(x.x, x.y, t);
        semi += w * ((gh.x - ge.x) * (gh.x - ge.x) + (gh.y - ge.y) * (gh.y - ge.y));
      }
    }
  }
  return {std::sqrt(l2), std::sqrt(semi), std::sqrt(l2 + semi)};
}

ErrorNorms error_norms(const FieldVector& field, const VectorExact& exact, double t) {
  require_kind(*field.space, SpaceKind::P2Vector, "error_norms");
  const auto& quad = QuadratureRule::degree5();
  const auto& mesh = field.space->mesh();
  double l2 = 0.0;
  double semi = 0.0;
  for (std::size_t e = 0; e < mesh.num_triangles(); ++e) {
    const ElementGeometry geo(mesh, e);
    const ElementBasis basis(geo, ElementKind::P2);
    for (std::size_t q = 0; q < quad.weights.size(); ++q) {
      const double w = quad.weights[q] * geo.area;
      const Point2 x = geo.map(quad.points[q]);
      const Vec2 vh = eval_vector(field, e, basis, q);
      const Vec2 ve = exact.value(x.x, x.y, t);
      l2 += w * ((vh.x - ve.x) * (vh.x - ve.x) + (vh.y - ve.y) * (vh.y - ve.y));
      if (exact.gradient) {
        const Mat2 gh = eval_vector_gradient(field, e, basis, q);
        const Mat2 ge = exact.gradient(x.x, x.y, t);
        semi += w * ((gh.xx - ge.xx) * (gh.xx - ge.xx) + (gh.xy - ge.xy) * (gh.xy - ge.xy) +
                     (gh.yx - ge.yx) * (gh.yx - ge.yx) + (gh.yy - ge.yy) * (gh.yy - ge.yy));
      }
    }
  }
  return {std::sqrt(l2), std::sqrt(semi), std::sqrt(l2 + semi)};
}

ErrorNorms difference_norms(const FieldVector& field, const FieldVector& reference) {
  if (field.space != reference.space || field.size() != reference.size()) {
    throw std::invalid_argument("difference_norms: fields live on different spaces");
  }
  std::vector<double> d(field.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = field.values[i] - reference.values[i];
  double l2 = 0.0;
  double semi = 0.0;
  if (field.space->kind() == SpaceKind::P2Vector) {
    const auto ops = assemble_vector_operators(*field.space);
    l2 = dot(d, spmv(ops.mass, d));
    semi = dot(d, spmv(ops.stiffness, d));
  } else {
    l2 = dot(d, spmv(assemble_mass(*field.space), d));
    semi = dot(d, spmv(assemble_stiffness(*field.space), d));
  }
  l2 = std::max(l2, 0.0);
  semi = std::max(semi, 0.0);
  return {std::sqrt(l2), std::sqrt(semi), std::sqrt(l2 + semi)};
}

void apply_dirichlet(CsrMatrix& a, std::span<double> rhs, std::span<const int> dofs,
                     double value) {
  const std::vector<double> values(dofs.size(), value);
  apply_dirichlet(a, rhs, dofs, values);
}

void apply_dirichlet(CsrMatrix& a, std::span<double> rhs, std::span<const int> dofs,
                     std::span<const double> values) {
  if (a.rows() != a.cols() || rhs.size() != a.rows() || values.size() != dofs.size()) {
    throw std::invalid_argument("apply_dirichlet: dimension mismatch");
  }
  if (dofs.empty()) return;
  const std::size_t n = a.rows();
  std::vector<char> pinned(n, 0);
  std::vector<double> g(n, 0.0);
  for (std::size_t k = 0; k < dofs.size(); ++k) {
    if (dofs[k] < 0 || static_cast<std::size_t>(dofs[k]) >= n) {
      throw std::out_of_range("apply_dirichlet: dof " + std::to_string(dofs[k]) + " out of range");
    }
    pinned[dofs[k]] = 1;
    g[dofs[k]] = values[k];
  }
  const auto& offsets = a.row_offsets();
  const auto& cols = a.column_indices();
  auto& vals = a.values();
  for (std::size_t i = 0; i < n; ++i) {
    if (pinned[i]) {
      bool has_diagonal = false;
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
        const bool diag = static_cast<std::size_t>(cols[k]) == i;
        vals[k] = diag ? 1.0 : 0.0;
        has_diagonal = has_diagonal || diag;
      }
      if (!has_diagonal) {
        throw std::invalid_argument("apply_dirichlet: pinned row lacks a diagonal slot");
      }
      rhs[i] = g[i];
    } else {
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
        const auto j = static_cast<std::size_t>(cols[k]);
        if (pinned[j]) {
          rhs[i] -= vals[k] * g[j];
          vals[k] = 0.0;
        }
      }
    }
  }
}

}  // namespace nspnp
