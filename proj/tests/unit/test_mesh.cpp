#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "doctest.h"
#include "nspnp/mesh.hpp"

using namespace nspnp;

TEST_CASE("mesh counts") {
  const auto m = build_rect_mesh({0, 1, 0, 1}, 1, 1);
  CHECK(m.num_vertices() == 4);
  CHECK(m.num_triangles() == 2);

  const auto m40 = build_rect_mesh({-1, 1, -1, 1}, 40, 40);
  CHECK(m40.h() == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(m40.num_vertices() == 1681);
  CHECK(m40.num_triangles() == 3200);

  const auto m100 = build_rect_mesh({0, 1, 0, 1}, 100, 100);
  CHECK(m100.h() == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(m100.num_vertices() == 10201);
}

TEST_CASE("mesh orientation, partition and diagonal convention") {
  for (auto [nx, ny] : {std::pair{1, 1}, {3, 3}, {5, 5}}) {
    const auto m = build_rect_mesh({-1, 1, -1, 1}, nx, ny);
    double total = 0.0;
    for (std::size_t t = 0; t < m.num_triangles(); ++t) {
      CHECK(m.signed_area(t) > 0.0);
      total += m.signed_area(t);
    }
    CHECK(std::abs(total - 4.0) <= 1e-13 * 4.0);
  }
  // Cell (0,0) of the unit square is cut from (0,0) to (1,1).
  const auto m = build_rect_mesh({0, 1, 0, 1}, 1, 1);
  for (const auto& tri : m.triangles()) {
    CHECK(std::count(tri.begin(), tri.end(), 0) == 1);
    CHECK(std::count(tri.begin(), tri.end(), 3) == 1);
  }
}

TEST_CASE("edges are shared by one or two triangles") {
  const auto m = build_rect_mesh({0, 2, 0, 1}, 4, 2);
  std::vector<int> incidence(m.num_edges(), 0);
  for (const auto& te : m.triangle_edges()) {
    for (int e : te) ++incidence[e];
  }
  for (std::size_t e = 0; e < m.num_edges(); ++e) {
    CHECK(incidence[e] == (m.boundary_edge()[e] ? 1 : 2));
  }
  // Local edge k is opposite local vertex k.
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles()[t];
    for (int k = 0; k < 3; ++k) {
      const auto& ed = m.edges()[m.triangle_edges()[t][k]];
      CHECK(ed[0] != tri[k]);
      CHECK(ed[1] != tri[k]);
    }
  }
}

TEST_CASE("boundary vertex flags follow coordinates") {
  const Rect r{-1, 1, 0, 3};
  const auto m = build_rect_mesh(r, 4, 6);
  for (std::size_t v = 0; v < m.num_vertices(); ++v) {
    const auto p = m.vertices()[v];
    const bool on = p.x == r.ax || p.x == r.bx || p.y == r.ay || p.y == r.by;
    CHECK(m.boundary_vertex()[v] == on);
  }
}

TEST_CASE("P2 node counts") {
  const auto m1 = build_rect_mesh({0, 1, 0, 1}, 1, 1);
  CHECK(m1.num_edges() == 5);
  CHECK(m1.num_p2_nodes() == 9);
  const auto m2 = build_rect_mesh({0, 1, 0, 1}, 2, 2);
  CHECK(m2.num_edges() == 16);
  CHECK(m2.num_p2_nodes() == 25);

  // Brute force: distinct vertex and midpoint coordinates on the refined grid.
  for (int nx = 1; nx <= 8; ++nx) {
    for (int ny = 1; ny <= 8; ++ny) {
      const auto m = build_rect_mesh({0, double(nx), 0, double(ny)}, nx, ny);
      std::set<std::pair<long, long>> pts;
      for (std::size_t t = 0; t < m.num_triangles(); ++t) {
        const auto& tri = m.triangles()[t];
        for (int a = 0; a < 3; ++a) {
          for (int b = a; b < 3; ++b) {
            const auto pa = m.vertices()[tri[a]];
            const auto pb = m.vertices()[tri[b]];
            pts.insert({std::lround(pa.x + pb.x), std::lround(pa.y + pb.y)});
          }
        }
      }
      CHECK(pts.size() == m.num_p2_nodes());
      CHECK(m.num_p2_nodes() == std::size_t((2 * nx + 1) * (2 * ny + 1)));
    }
  }
}

TEST_CASE("p2 numbering puts midpoints opposite their vertex") {
  const auto m = build_rect_mesh({0, 1.5, 0, 1}, 3, 2);
  const auto map = p2_numbering(m);
  REQUIRE(map.size() == m.num_triangles());
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles()[t];
    for (int k = 0; k < 3; ++k) CHECK(map[t][k] == tri[k]);
    for (int k = 0; k < 3; ++k) {
      const auto a = m.vertices()[tri[(k + 1) % 3]];
      const auto b = m.vertices()[tri[(k + 2) % 3]];
      const auto mid = m.p2_node_coords(map[t][3 + k]);
      CHECK(mid.x == doctest::Approx(0.5 * (a.x + b.x)));
      CHECK(mid.y == doctest::Approx(0.5 * (a.y + b.y)));
    }
  }
}

TEST_CASE("boundary dofs") {
  const auto m1 = build_rect_mesh({0, 1, 0, 1}, 1, 1);
  CHECK(boundary_dofs(m1, SpaceKind::P1) == std::vector<int>{0, 1, 2, 3});

  const auto m2 = build_rect_mesh({0, 1, 0, 1}, 2, 2);
  const auto b2 = boundary_dofs(m2, SpaceKind::P1);
  CHECK(b2.size() == 8);
  CHECK(std::find(b2.begin(), b2.end(), 4) == b2.end());

  const auto p2 = boundary_dofs(m1, SpaceKind::P2Scalar);
  CHECK(p2.size() == 8);
  for (int k : p2) {
    const auto p = m1.p2_node_coords(k);
    CHECK_FALSE((p.x == 0.5 && p.y == 0.5));
  }

  const auto vec = boundary_dofs(m2, SpaceKind::P2Vector);
  const auto sc = boundary_dofs(m2, SpaceKind::P2Scalar);
  CHECK(vec.size() == 2 * sc.size());
  CHECK(std::is_sorted(vec.begin(), vec.end()));
  CHECK(std::adjacent_find(vec.begin(), vec.end()) == vec.end());
  for (std::size_t k = 0; k < sc.size(); ++k) {
    CHECK(vec[k] == sc[k]);
    CHECK(vec[sc.size() + k] == sc[k] + int(m2.num_p2_nodes()));
  }
}

TEST_CASE("mesh construction errors") {
  CHECK_THROWS(build_rect_mesh({0, 1, 0, 1}, 0, 1));
  CHECK_THROWS(build_rect_mesh({0, 1, 0, 1}, 1, 0));
  CHECK_THROWS(build_rect_mesh({1, 1, 0, 1}, 1, 1));
  CHECK_THROWS(build_rect_mesh({0, 1, 1, 0}, 1, 1));
}
