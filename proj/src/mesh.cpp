#include "wg/mesh.hpp"

#include "wg/errors.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wg {

namespace {

double signed_area(Vec2 a, Vec2 b, Vec2 c) { return 0.5 * cross(b - a, c - a); }

} // namespace

Mesh Mesh::unit_square(int n) {
  if (n < 1) throw std::invalid_argument("unit_square: n must be >= 1");
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<size_t>(n + 1) * (n + 1));
  for (int k = 0; k <= n; ++k)
    for (int i = 0; i <= n; ++i)
      vertices.push_back({static_cast<double>(i) / n, static_cast<double>(k) / n});

  auto id = [n](int i, int k) { return k * (n + 1) + i; };
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(static_cast<size_t>(2) * n * n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      // Each cell is split by the diagonal from its lower-left corner to its
      // upper-right corner.
      int p00 = id(i, k), p10 = id(i + 1, k), p01 = id(i, k + 1), p11 = id(i + 1, k + 1);
      triangles.push_back({p00, p10, p11});
      triangles.push_back({p00, p11, p01});
    }
  }
  return from_vertices(std::move(vertices), std::move(triangles));
}

Mesh Mesh::from_vertices(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles) {
  Mesh m;
  m.vertices_ = std::move(vertices);
  const int nv = m.num_vertices();

  std::set<std::array<int, 3>> seen;
  m.triangles_.reserve(triangles.size());
  for (size_t t = 0; t < triangles.size(); ++t) {
    std::array<int, 3> v = triangles[t];
    for (int k = 0; k < 3; ++k) {
      if (v[k] < 0 || v[k] >= nv)
        throw Error(ErrorKind::MeshTopology, "triangle " + std::to_string(t) +
                                                 " references vertex " + std::to_string(v[k]) +
                                                 " out of range [0," + std::to_string(nv) + ")");
    }
    if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2])
      throw Error(ErrorKind::MeshTopology,
                  "triangle " + std::to_string(t) + " has a repeated vertex");
    double sa = signed_area(m.vertices_[v[0]], m.vertices_[v[1]], m.vertices_[v[2]]);
    if (sa == 0.0)
      throw Error(ErrorKind::MeshTopology, "triangle " + std::to_string(t) + " is degenerate");
    if (sa < 0.0) std::swap(v[1], v[2]); // repair to CCW

    std::array<int, 3> key = v;
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second)
      throw Error(ErrorKind::MeshTopology, "duplicate triangle at index " + std::to_string(t));

    TriInfo info;
    info.v = v;
    m.triangles_.push_back(info);
  }
  m.build_topology();
  m.build_geometry();
  return m;
}

void Mesh::build_topology() {
  std::map<std::pair<int, int>, int> edge_of;
  num_boundary_edges_ = 0;
  for (int t = 0; t < num_triangles(); ++t) {
    TriInfo& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      int a = tri.v[k], b = tri.v[(k + 1) % 3];
      auto key = std::minmax(a, b);
      auto it = edge_of.find(key);
      int e;
      if (it == edge_of.end()) {
        e = num_edges();
        edge_of.emplace(key, e);
        EdgeInfo info;
        info.lo = key.first;
        info.hi = key.second;
        info.tri[0] = t;
        edges_.push_back(info);
      } else {
        e = it->second;
        EdgeInfo& info = edges_[e];
        if (info.tri[1] != -1)
          throw Error(ErrorKind::MeshTopology,
                      "non-manifold edge (" + std::to_string(info.lo) + "," +
                          std::to_string(info.hi) + ") shared by more than two triangles");
        info.tri[1] = t;
      }
      tri.edge[k] = e;
      tri.edge_sign[k] = (a < b) ? 1.0 : -1.0;
    }
  }
  for (EdgeInfo& e : edges_) {
    e.boundary = (e.tri[1] == -1);
    if (e.boundary) ++num_boundary_edges_;
    Vec2 d = vertices_[e.hi] - vertices_[e.lo];
    e.length = norm(d);
    e.unit_dir = (1.0 / e.length) * d;
    e.unit_normal = {e.unit_dir.y, -e.unit_dir.x};
  }
}

void Mesh::build_geometry() {
  total_area_ = 0.0;
  max_diameter_ = 0.0;
  shape_regularity_ = 0.0;
  for (TriInfo& tri : triangles_) {
    Vec2 a = vertices_[tri.v[0]], b = vertices_[tri.v[1]], c = vertices_[tri.v[2]];
    tri.area = signed_area(a, b, c);
    tri.centroid = (1.0 / 3.0) * (a + b + c);
    double l0 = norm(b - a), l1 = norm(c - b), l2 = norm(a - c);
    tri.diameter = std::max({l0, l1, l2});
    tri.inradius = 2.0 * tri.area / (l0 + l1 + l2);
    for (int k = 0; k < 3; ++k) {
      Vec2 p = vertices_[tri.v[k]], q = vertices_[tri.v[(k + 1) % 3]];
      Vec2 d = q - p;
      double len = norm(d);
      tri.outward_normal[k] = {d.y / len, -d.x / len}; // right of CCW traversal
    }
    total_area_ += tri.area;
    max_diameter_ = std::max(max_diameter_, tri.diameter);
    shape_regularity_ = std::max(shape_regularity_, tri.diameter / tri.inradius);
  }
}

Mesh Mesh::refined() const {
  std::vector<Vec2> vertices = vertices_;
  vertices.reserve(vertices.size() + edges_.size());
  const int nv = num_vertices();
  for (const EdgeInfo& e : edges_)
    vertices.push_back(0.5 * (vertices_[e.lo] + vertices_[e.hi]));

  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(static_cast<size_t>(4) * triangles_.size());
  for (const TriInfo& tri : triangles_) {
    int m01 = nv + tri.edge[0];
    int m12 = nv + tri.edge[1];
    int m20 = nv + tri.edge[2];
    triangles.push_back({tri.v[0], m01, m20});
    triangles.push_back({tri.v[1], m12, m01});
    triangles.push_back({tri.v[2], m20, m12});
    triangles.push_back({m01, m12, m20});
  }
  return from_vertices(std::move(vertices), std::move(triangles));
}

namespace {

struct LineReader {
  std::istream& in;
  int line_no = 0;

  // Next non-empty line with comments stripped; false at end of input.
  bool next(std::string& out) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      bool blank = line.find_first_not_of(" \t\r\n") == std::string::npos;
      if (!blank) {
        out = line;
        return true;
      }
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::MeshFormat, "line " + std::to_string(line_no) + ": " + msg);
  }
};

} // namespace

Mesh Mesh::load_node_ele(std::istream& in) {
  LineReader reader{in};
  std::string line;

  if (!reader.next(line)) reader.fail("missing 'node' header");
  std::istringstream head(line);
  std::string keyword;
  int nv = 0, base = 0;
  if (!(head >> keyword >> nv >> base) || keyword != "node")
    reader.fail("expected 'node <count> <index-base>'");
  if (nv < 3) reader.fail("vertex count must be at least 3");
  if (base != 0 && base != 1) reader.fail("index base must be 0 or 1");

  std::vector<Vec2> vertices(nv);
  for (int i = 0; i < nv; ++i) {
    if (!reader.next(line)) reader.fail("unexpected end of input in vertex list");
    std::istringstream ls(line);
    if (!(ls >> vertices[i].x >> vertices[i].y))
      reader.fail("expected two vertex coordinates");
  }

  if (!reader.next(line)) reader.fail("missing 'ele' header");
  std::istringstream ehead(line);
  int nt = 0;
  if (!(ehead >> keyword >> nt) || keyword != "ele") reader.fail("expected 'ele <count>'");
  if (nt < 1) reader.fail("triangle count must be at least 1");

  std::vector<std::array<int, 3>> triangles(nt);
  for (int t = 0; t < nt; ++t) {
    if (!reader.next(line)) reader.fail("unexpected end of input in triangle list");
    std::istringstream ls(line);
    std::array<int, 3> v{};
    if (!(ls >> v[0] >> v[1] >> v[2])) reader.fail("expected three vertex indices");
    for (int k = 0; k < 3; ++k) {
      v[k] -= base;
      if (v[k] < 0 || v[k] >= nv)
        reader.fail("vertex index " + std::to_string(v[k] + base) + " out of range");
    }
    triangles[t] = v;
  }
  return from_vertices(std::move(vertices), std::move(triangles));
}

Mesh Mesh::load_node_ele_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open mesh file '" + path + "'");
  return load_node_ele(in);
}

} // namespace wg
