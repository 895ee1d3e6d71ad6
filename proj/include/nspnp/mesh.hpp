#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace nspnp {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned rectangle [ax, bx] x [ay, by].
struct Rect {
  double ax = 0.0;
  double bx = 1.0;
  double ay = 0.0;
  double by = 1.0;

  double area() const { return (bx - ax) * (by - ay); }
};

enum class SpaceKind { P1, P2Scalar, P2Vector };

/// Structured triangulation of a rectangle.
///
/// Vertices are numbered row-major (x fastest). Each grid cell is split along
/// its lower-left to upper-right diagonal into two counter-clockwise
/// triangles. Edges are numbered lexicographically by (min vertex, max vertex).
/// Local edge k of a triangle is the edge opposite its local vertex k.
///
/// P2 nodes: the vertices first, then one midpoint per edge
/// (global index = num_vertices() + edge index).
class StructuredTriMesh {
 public:
  StructuredTriMesh(const Rect& bounds, int nx, int ny);

  const Rect& bounds() const { return bounds_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  /// Uniform cell size along an axis.
  double h() const { return (bounds_.bx - bounds_.ax) / nx_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_p2_nodes() const { return vertices_.size() + edges_.size(); }

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  const std::vector<std::array<int, 3>>& triangle_edges() const { return triangle_edges_; }
  const std::vector<bool>& boundary_vertex() const { return boundary_vertex_; }
  const std::vector<bool>& boundary_edge() const { return boundary_edge_; }

  /// Signed area of triangle t (positive for every triangle of this mesh).
  double signed_area(std::size_t t) const;

  /// Global P2 node indices of triangle t: 3 vertices, then the midpoints of
  /// the edges opposite vertex 0, 1 and 2.
  std::array<int, 6> p2_nodes(std::size_t t) const;

  /// Coordinates of P2 node k.
  Point2 p2_node_coords(std::size_t k) const;

 private:
  Rect bounds_;
  int nx_;
  int ny_;
  std::vector<Point2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<bool> boundary_vertex_;
  std::vector<bool> boundary_edge_;
};

StructuredTriMesh build_rect_mesh(const Rect& bounds, int nx, int ny);

/// Per-triangle local-to-global P2 node map, `mesh.num_p2_nodes()` nodes total.
std::vector<std::array<int, 6>> p2_numbering(const StructuredTriMesh& mesh);

/// Sorted dof indices on the boundary. For P2Vector both components of each
/// boundary node are listed (component-blocked layout: x block then y block).
std::vector<int> boundary_dofs(const StructuredTriMesh& mesh, SpaceKind kind);

}  // namespace nspnp
