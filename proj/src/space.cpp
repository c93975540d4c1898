#include "wg/space.hpp"

#include <stdexcept>

namespace wg {

WgSpace::WgSpace(Family family, int j, int quad_boost)
    : family_(family), j_(j), boost_(quad_boost) {
  if (j < 0) throw std::invalid_argument("interior degree j must be >= 0");
  if (quad_boost < 0) throw std::invalid_argument("quadrature boost must be >= 0");
}

DofMap::DofMap(const Mesh& mesh, const WgSpace& space)
    : n0_(space.interior_dim()), ne_(space.edge_dim()) {
  interior_total_ = mesh.num_triangles() * n0_;
  total_ = interior_total_ + mesh.num_edges() * ne_;

  free_index_.assign(total_, 0);
  boundary_count_ = 0;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.edge(e).boundary) continue;
    for (int k = 0; k < ne_; ++k) free_index_[edge_offset(e) + k] = -1;
    boundary_count_ += ne_;
  }
  free_to_global_.reserve(total_ - boundary_count_);
  for (int g = 0; g < total_; ++g) {
    if (free_index_[g] < 0) continue;
    free_index_[g] = static_cast<int>(free_to_global_.size());
    free_to_global_.push_back(g);
  }
}

std::vector<int> DofMap::element_dofs(const Mesh& mesh, int t) const {
  const TriInfo& tri = mesh.triangle(t);
  std::vector<int> dofs;
  dofs.reserve(n0_ + 3 * ne_);
  for (int i = 0; i < n0_; ++i) dofs.push_back(interior_offset(t) + i);
  for (int le = 0; le < 3; ++le)
    for (int k = 0; k < ne_; ++k) dofs.push_back(edge_offset(tri.edge[le]) + k);
  return dofs;
}

WeakFunction::WeakFunction(const Mesh& mesh, const WgSpace& space)
    : n_tri_(mesh.num_triangles()),
      n_edge_(mesh.num_edges()),
      n0_(space.interior_dim()),
      ne_(space.edge_dim()),
      coeffs_(Eigen::VectorXd::Zero(n_tri_ * n0_ + n_edge_ * ne_)) {}

} // namespace wg
