#pragma once

#include <array>
#include <cmath>
#include <iosfwd>
#include <string>
#include <vector>

namespace wg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }

// Undirected mesh edge. The stored direction always runs from the lower to the
// higher vertex index; both adjacent triangles parametrize shared quantities in
// that one direction.
struct EdgeInfo {
  int lo = -1;
  int hi = -1;
  std::array<int, 2> tri = {-1, -1};
  bool boundary = false;
  double length = 0.0;
  Vec2 unit_dir;    // lo -> hi, unit length
  Vec2 unit_normal; // unit_dir rotated by -90 degrees
};

struct TriInfo {
  std::array<int, 3> v = {-1, -1, -1}; // counter-clockwise
  double area = 0.0;
  double diameter = 0.0;
  double inradius = 0.0;
  Vec2 centroid;
  std::array<int, 3> edge = {-1, -1, -1};           // local edge k = (v[k], v[k+1 mod 3])
  std::array<double, 3> edge_sign = {0.0, 0.0, 0.0}; // +1 if traversed lo->hi, else -1
  std::array<Vec2, 3> outward_normal;
};

// Immutable triangular mesh with derived edge topology and per-triangle
// geometry. Construction validates orientation and manifoldness; refinement
// returns a new mesh.
class Mesh {
public:
  static Mesh unit_square(int n);
  static Mesh from_vertices(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles);
  // Single-file node/ele text format, see README for the grammar.
  static Mesh load_node_ele(std::istream& in);
  static Mesh load_node_ele_file(const std::string& path);

  Mesh refined() const;

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_boundary_edges() const { return num_boundary_edges_; }

  Vec2 vertex(int i) const { return vertices_[i]; }
  const TriInfo& triangle(int t) const { return triangles_[t]; }
  const EdgeInfo& edge(int e) const { return edges_[e]; }

  // Corner coordinates of triangle t in CCW order.
  std::array<Vec2, 3> corners(int t) const {
    const TriInfo& tri = triangles_[t];
    return {vertices_[tri.v[0]], vertices_[tri.v[1]], vertices_[tri.v[2]]};
  }

  double total_area() const { return total_area_; }
  double max_diameter() const { return max_diameter_; }
  // max over triangles of diameter / inradius
  double shape_regularity() const { return shape_regularity_; }

private:
  Mesh() = default;
  void build_topology();
  void build_geometry();

  std::vector<Vec2> vertices_;
  std::vector<TriInfo> triangles_;
  std::vector<EdgeInfo> edges_;
  int num_boundary_edges_ = 0;
  double total_area_ = 0.0;
  double max_diameter_ = 0.0;
  double shape_regularity_ = 0.0;
};

} // namespace wg
