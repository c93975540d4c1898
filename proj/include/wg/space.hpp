#pragma once

#include "wg/basis.hpp"
#include "wg/mesh.hpp"

#include <Eigen/Dense>

#include <vector>

namespace wg {

// The two admissible element families. Full pairs interior degree j with edge
// degree j+1 and gradient space [P_{j+1}]^2; RT pairs j with edge degree j and
// the Raviart-Thomas space of order j. No other pairing is constructible.
enum class Family { Full, RT };

class WgSpace {
public:
  explicit WgSpace(Family family, int j, int quad_boost = 3);

  Family family() const { return family_; }
  int interior_degree() const { return j_; }
  int edge_degree() const { return family_ == Family::Full ? j_ + 1 : j_; }
  int interior_dim() const { return (j_ + 1) * (j_ + 2) / 2; }
  int edge_dim() const { return edge_degree() + 1; }
  VectorVariant vector_variant() const {
    return family_ == Family::Full ? VectorVariant::Full : VectorVariant::RaviartThomas;
  }
  int gradient_dim() const { return vector_basis_dim(vector_variant(), j_); }
  int local_dim() const { return interior_dim() + 3 * edge_dim(); }

  // Default quadrature exactness 2(j+1) + boost; the boost absorbs
  // non-polynomial coefficient fields.
  int quad_boost() const { return boost_; }
  int volume_exactness() const { return 2 * (j_ + 1) + boost_; }
  int edge_exactness() const { return 2 * (j_ + 1) + boost_; }

private:
  Family family_;
  int j_;
  int boost_;
};

// Global numbering: interior coefficients blocked by triangle first, then one
// shared coefficient block per global edge. Boundary DOFs are the blocks of
// boundary-flagged edges.
class DofMap {
public:
  DofMap(const Mesh& mesh, const WgSpace& space);

  int total() const { return total_; }
  int interior_total() const { return interior_total_; }
  int edge_total() const { return total_ - interior_total_; }
  int interior_dim() const { return n0_; }
  int edge_dim() const { return ne_; }

  int interior_offset(int t) const { return t * n0_; }
  int edge_offset(int e) const { return interior_total_ + e * ne_; }

  bool is_boundary_dof(int g) const { return free_index_[g] < 0; }
  int boundary_count() const { return boundary_count_; }
  int free_count() const { return total_ - boundary_count_; }
  // -1 for boundary DOFs
  int free_index(int g) const { return free_index_[g]; }
  const std::vector<int>& free_to_global() const { return free_to_global_; }

  // Global indices of one element's local block: interior, then the three
  // edge blocks in local-edge order.
  std::vector<int> element_dofs(const Mesh& mesh, int t) const;

private:
  int n0_, ne_, total_, interior_total_, boundary_count_;
  std::vector<int> free_index_;
  std::vector<int> free_to_global_;
};

// Coefficient vector of a weak function: one interior block per triangle plus
// one block per global edge, single-valued across the two adjacent triangles.
class WeakFunction {
public:
  WeakFunction(const Mesh& mesh, const WgSpace& space);

  int num_triangles() const { return n_tri_; }
  int num_edges() const { return n_edge_; }
  int interior_dim() const { return n0_; }
  int edge_dim() const { return ne_; }

  Eigen::VectorXd& coeffs() { return coeffs_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }

  Eigen::VectorBlock<Eigen::VectorXd> interior(int t) {
    return coeffs_.segment(t * n0_, n0_);
  }
  Eigen::VectorBlock<const Eigen::VectorXd> interior(int t) const {
    return coeffs_.segment(t * n0_, n0_);
  }
  Eigen::VectorBlock<Eigen::VectorXd> edge(int e) {
    return coeffs_.segment(n_tri_ * n0_ + e * ne_, ne_);
  }
  Eigen::VectorBlock<const Eigen::VectorXd> edge(int e) const {
    return coeffs_.segment(n_tri_ * n0_ + e * ne_, ne_);
  }

private:
  int n_tri_, n_edge_, n0_, ne_;
  Eigen::VectorXd coeffs_;
};

} // namespace wg
