#include "wg/errors.hpp"
#include "wg/mesh.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

using namespace wg;

namespace {

std::set<int> boundary_vertices(const Mesh& mesh) {
  std::set<int> out;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.edge(e).boundary) continue;
    out.insert(mesh.edge(e).lo);
    out.insert(mesh.edge(e).hi);
  }
  return out;
}

void check_invariants(const Mesh& mesh) {
  int boundary = 0;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const EdgeInfo& edge = mesh.edge(e);
    CHECK(edge.lo < edge.hi);
    CHECK(edge.tri[0] >= 0);
    if (edge.boundary) {
      CHECK(edge.tri[1] == -1);
      ++boundary;
    } else {
      CHECK(edge.tri[1] >= 0);
    }
    CHECK(std::abs(norm(edge.unit_normal) - 1.0) < 1e-14);
  }
  CHECK(boundary == mesh.num_boundary_edges());

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriInfo& tri = mesh.triangle(t);
    CHECK(tri.area > 0.0); // CCW by construction
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(norm(tri.outward_normal[k]) - 1.0) < 1e-14);
      const EdgeInfo& edge = mesh.edge(tri.edge[k]);
      int a = tri.v[k], b = tri.v[(k + 1) % 3];
      CHECK(std::min(a, b) == edge.lo);
      CHECK(std::max(a, b) == edge.hi);
      CHECK(tri.edge_sign[k] == (a < b ? 1.0 : -1.0));
    }
  }

  // Opposite outward normals across interior edges.
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const EdgeInfo& edge = mesh.edge(e);
    if (edge.boundary) continue;
    Vec2 n[2];
    for (int side = 0; side < 2; ++side) {
      const TriInfo& tri = mesh.triangle(edge.tri[side]);
      for (int k = 0; k < 3; ++k)
        if (tri.edge[k] == e) n[side] = tri.outward_normal[k];
    }
    CHECK(std::abs(n[0].x + n[1].x) < 1e-14);
    CHECK(std::abs(n[0].y + n[1].y) < 1e-14);
  }
}

} // namespace

TEST_CASE("structured unit square counts") {
  Mesh m1 = Mesh::unit_square(1);
  CHECK(m1.num_triangles() == 2);
  CHECK(m1.num_vertices() == 4);
  CHECK(m1.num_edges() == 5);
  CHECK(m1.num_boundary_edges() == 4);
  check_invariants(m1);

  Mesh m2 = Mesh::unit_square(2);
  CHECK(m2.num_triangles() == 8);
  CHECK(m2.num_vertices() == 9);
  CHECK(m2.num_edges() == 16);
  check_invariants(m2);

  // V - E + F = 1 for a simply connected triangulation
  for (const Mesh& m : {m1, m2})
    CHECK(m.num_vertices() - m.num_edges() + m.num_triangles() == 1);

  CHECK(std::abs(Mesh::unit_square(4).total_area() - 1.0) < 1e-12);
  CHECK_THROWS_AS(Mesh::unit_square(0), std::invalid_argument);
}

TEST_CASE("uniform refinement") {
  Mesh m = Mesh::unit_square(1);
  Mesh r = m.refined();
  CHECK(r.num_triangles() == 8);
  CHECK(std::abs(r.total_area() - m.total_area()) < 1e-12);
  CHECK(std::abs(r.max_diameter() - 0.5 * m.max_diameter()) < 1e-12 * m.max_diameter());
  CHECK(std::abs(r.shape_regularity() - m.shape_regularity()) <
        1e-12 * m.shape_regularity());
  CHECK(r.num_vertices() - r.num_edges() + r.num_triangles() == 1);
  check_invariants(r);

  // Reference triangle splits into four children of area 1/8.
  Mesh ref = Mesh::from_vertices({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  Mesh refr = ref.refined();
  REQUIRE(refr.num_triangles() == 4);
  for (int t = 0; t < 4; ++t) CHECK(std::abs(refr.triangle(t).area - 0.125) < 1e-14);

  // Boundary vertices of the parent stay boundary vertices.
  Mesh m3 = Mesh::unit_square(3);
  std::set<int> parent_bv = boundary_vertices(m3);
  std::set<int> child_bv = boundary_vertices(m3.refined());
  for (int v : parent_bv) CHECK(child_bv.count(v) == 1); // same ids: parents come first
}

TEST_CASE("from_vertices repairs orientation and validates topology") {
  // clockwise input is stored CCW
  Mesh m = Mesh::from_vertices({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}});
  CHECK(m.triangle(0).area > 0.0);
  CHECK(m.num_boundary_edges() == 3);

  CHECK_THROWS_AS(Mesh::from_vertices({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 3}}), Error);
  CHECK_THROWS_AS(Mesh::from_vertices({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}, {2, 0, 1}}), Error);

  // three triangles sharing one edge: non-manifold
  CHECK_THROWS_WITH_AS(Mesh::from_vertices({{0, 0}, {1, 0}, {0, 1}, {1, 1}, {-1, -1}},
                                           {{0, 1, 2}, {0, 3, 1}, {0, 1, 4}}),
                       doctest::Contains("non-manifold"), Error);
}

TEST_CASE("two triangles sharing the diagonal") {
  Mesh m = Mesh::from_vertices({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}});
  int interior = 0;
  for (int e = 0; e < m.num_edges(); ++e)
    if (!m.edge(e).boundary) ++interior;
  CHECK(interior == 1);
  CHECK(m.num_boundary_edges() == 4);
  check_invariants(m);
}

TEST_CASE("node/ele loader") {
  SUBCASE("single triangle, zero-based") {
    std::istringstream in("node 3 0\n0 0\n1 0\n0 1\nele 1\n0 1 2\n");
    Mesh m = Mesh::load_node_ele(in);
    CHECK(m.num_triangles() == 1);
    CHECK(m.num_boundary_edges() == 3);
  }
  SUBCASE("one-based with comments, clockwise repaired") {
    std::istringstream in("# sample\nnode 3 1\n0 0\n1 0\n0 1\nele 1\n1 3 2\n");
    Mesh m = Mesh::load_node_ele(in);
    CHECK(m.triangle(0).area > 0.0);
  }
  SUBCASE("dangling vertex index names the line") {
    std::istringstream in("node 3 0\n0 0\n1 0\n0 1\nele 1\n0 1 7\n");
    CHECK_THROWS_WITH_AS(Mesh::load_node_ele(in), doctest::Contains("line 6"), Error);
  }
  SUBCASE("malformed header") {
    std::istringstream in("vertices 3\n");
    CHECK_THROWS_WITH_AS(Mesh::load_node_ele(in), doctest::Contains("line 1"), Error);
  }
  SUBCASE("truncated vertex list") {
    std::istringstream in("node 3 0\n0 0\n1 0\n");
    CHECK_THROWS_AS(Mesh::load_node_ele(in), Error);
  }
  SUBCASE("bad coordinate") {
    std::istringstream in("node 3 0\n0 0\nnope 0\n0 1\nele 1\n0 1 2\n");
    CHECK_THROWS_WITH_AS(Mesh::load_node_ele(in), doctest::Contains("line 3"), Error);
  }
}

TEST_CASE("refined structured meshes keep exact area and Euler characteristic") {
  Mesh m = Mesh::unit_square(3);
  for (int r = 0; r < 2; ++r) {
    m = m.refined();
    CHECK(std::abs(m.total_area() - 1.0) < 1e-12);
    CHECK(m.num_vertices() - m.num_edges() + m.num_triangles() == 1);
  }
  check_invariants(m);
  CHECK(m.shape_regularity() < 10.0);
}
