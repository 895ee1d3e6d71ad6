#include "nspnp/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nspnp {

StructuredTriMesh::StructuredTriMesh(const Rect& bounds, int nx, int ny)
    : bounds_(bounds), nx_(nx), ny_(ny) {
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("mesh: cell counts must be >= 1, got nx=" + std::to_string(nx) +
                                " ny=" + std::to_string(ny));
  }
  if (!(bounds.ax < bounds.bx) || !(bounds.ay < bounds.by)) {
    throw std::invalid_argument("mesh: degenerate rectangle bounds");
  }
  const double hx = (bounds.bx - bounds.ax) / nx;
  const double hy = (bounds.by - bounds.ay) / ny;
  if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy)) {
    throw std::invalid_argument("mesh: non-uniform cell size (hx=" + std::to_string(hx) +
                                ", hy=" + std::to_string(hy) + ")");
  }

  const int vx = nx + 1;
  const int vy = ny + 1;
  vertices_.reserve(static_cast<std::size_t>(vx) * vy);
  boundary_vertex_.reserve(static_cast<std::size_t>(vx) * vy);
  for (int j = 0; j < vy; ++j) {
    // Hit the far boundary exactly instead of accumulating ax + i*hx.
    const double y = (j == ny) ? bounds.by : bounds.ay + j * hy;
    for (int i = 0; i < vx; ++i) {
      const double x = (i == nx) ? bounds.bx : bounds.ax + i * hx;
      vertices_.push_back({x, y});
      boundary_vertex_.push_back(i == 0 || i == nx || j == 0 || j == ny);
    }
  }

  auto vid = [vx](int i, int j) { return j * vx + i; };
  triangles_.reserve(2 * static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j);
      const int v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1);
      const int v11 = vid(i + 1, j + 1);
      triangles_.push_back({v00, v10, v11});
      triangles_.push_back({v00, v11, v01});
    }
  }

  // Collect edges as (min, max) keys, then number lexicographically.
  std::vector<std::array<int, 2>> all;
  all.reserve(3 * triangles_.size());
  for (const auto& tri : triangles_) {
    for (int k = 0; k < 3; ++k) {
      const int a = tri[(k + 1) % 3];
      const int b = tri[(k + 2) % 3];
      all.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(all.begin(), all.end());
  std::vector<int> incidence;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (edges_.empty() || edges_.back() != all[i]) {
      edges_.push_back(all[i]);
      incidence.push_back(0);
    }
    ++incidence.back();
  }
  boundary_edge_.resize(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    boundary_edge_[e] = (incidence[e] == 1);
  }

  triangle_edges_.resize(triangles_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[(k + 1) % 3];
      const int b = tri[(k + 2) % 3];
      const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
      const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
      triangle_edges_[t][k] = static_cast<int>(it - edges_.begin());
    }
  }
}

double StructuredTriMesh::signed_area(std::size_t t) const {
  const auto& tri = triangles_[t];
  const Point2& a = vertices_[tri[0]];
  const Point2& b = vertices_[tri[1]];
  const Point2& c = vertices_[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

std::array<int, 6> StructuredTriMesh::p2_nodes(std::size_t t) const {
  const auto& tri = triangles_[t];
  const auto& te = triangle_edges_[t];
  const int nv = static_cast<int>(vertices_.size());
  return {tri[0], tri[1], tri[2], nv + te[0], nv + te[1], nv + te[2]};
}

Point2 StructuredTriMesh::p2_node_coords(std::size_t k) const {
  if (k < vertices_.size()) {
    return vertices_[k];
  }
  const auto& e = edges_.at(k - vertices_.size());
  const Point2& a = vertices_[e[0]];
  const Point2& b = vertices_[e[1]];
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

StructuredTriMesh build_rect_mesh(const Rect& bounds, int nx, int ny) {
  return StructuredTriMesh(bounds, nx, ny);
}

std::vector<std::array<int, 6>> p2_numbering(const StructuredTriMesh& mesh) {
  std::vector<std::array<int, 6>> map(mesh.num_triangles());
  for (std::size_t t = 0; t < map.size(); ++t) {
    map[t] = mesh.p2_nodes(t);
  }
  return map;
}

std::vector<int> boundary_dofs(const StructuredTriMesh& mesh, SpaceKind kind) {
  std::vector<int> dofs;
  const auto& bv = mesh.boundary_vertex();
  for (std::size_t v = 0; v < bv.size(); ++v) {
    if (bv[v]) dofs.push_back(static_cast<int>(v));
  }
  if (kind == SpaceKind::P1) {
    return dofs;
  }
  const int nv = static_cast<int>(mesh.num_vertices());
  const auto& be = mesh.boundary_edge();
  for (std::size_t e = 0; e < be.size(); ++e) {
    if (be[e]) dofs.push_back(nv + static_cast<int>(e));
  }
  if (kind == SpaceKind::P2Vector) {
    const int n = static_cast<int>(mesh.num_p2_nodes());
    const std::size_t scalar_count = dofs.size();
    for (std::size_t i = 0; i < scalar_count; ++i) {
      dofs.push_back(dofs[i] + n);
    }
  }
  return dofs;
}

}  // namespace nspnp
