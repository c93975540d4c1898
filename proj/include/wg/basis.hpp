#pragma once

#include "wg/mesh.hpp"

#include <Eigen/Dense>

#include <vector>

namespace wg {

// Polynomial basis of total degree <= degree on the reference triangle,
// orthonormalized against the exact monomial integrals. Physical elements use
// the pullback through their affine map, which keeps local mass matrices a
// multiple of the identity.
class ScalarBasis {
public:
  explicit ScalarBasis(int degree);

  int degree() const { return degree_; }
  int dim() const { return static_cast<int>(px_.size()); }

  double value(int i, double x, double y) const;
  void values(double x, double y, Eigen::Ref<Eigen::VectorXd> out) const;

  // Column i holds the monomial coefficients of member i; monomials are
  // ordered by total degree, x-power descending within a degree.
  const Eigen::MatrixXd& monomial_coeffs() const { return coeffs_; }
  int monomial_px(int k) const { return px_[k]; }
  int monomial_py(int k) const { return py_[k]; }

  static const ScalarBasis& cached(int degree);

private:
  int degree_;
  std::vector<int> px_, py_;
  Eigen::MatrixXd coeffs_;
};

// Orthonormal Legendre basis on [0,1]; t is the arclength fraction along the
// global (low-to-high vertex) direction of an edge.
class EdgeBasis {
public:
  explicit EdgeBasis(int degree);

  int degree() const { return degree_; }
  int dim() const { return degree_ + 1; }

  double value(int k, double t) const;
  void values(double t, Eigen::Ref<Eigen::VectorXd> out) const;

  static const EdgeBasis& cached(int degree);

private:
  int degree_;
};

enum class VectorVariant { Full, RaviartThomas };

// Raw member count of the gradient space V(T,r):
//   Full(j):  [P_{j+1}]^2, dimension (j+2)(j+3)
//   RT(j):    [P_j]^2 + x * homogeneous P_j, dimension (j+1)(j+3)
int vector_basis_dim(VectorVariant variant, int j);

// Vector-valued polynomial basis spanning the gradient space on one triangle.
// Members are monomials in the local frame xi = (p - center)/scale, which is a
// similarity map, so both families span the same space as in global
// coordinates. An optional orthonormalizing transform (computed from the L2
// Gram matrix of the raw members) improves conditioning of the local solves.
class VectorBasis {
public:
  VectorBasis(VectorVariant variant, int j) : VectorBasis(variant, j, {0.0, 0.0}, 1.0) {}
  VectorBasis(VectorVariant variant, int j, Vec2 center, double scale);

  VectorVariant variant() const { return variant_; }
  int degree_j() const { return j_; }
  int dim() const { return static_cast<int>(members_.size()); }

  Vec2 raw_value(int m, Vec2 p) const;
  double raw_divergence(int m, Vec2 p) const;
  void raw_values(Vec2 p, Eigen::Ref<Eigen::Matrix2Xd> out) const;
  void raw_divergences(Vec2 p, Eigen::Ref<Eigen::VectorXd> out) const;

  // gram must be the L2(T) Gram matrix of the raw members; throws a
  // degenerate-element error when its condition estimate exceeds cond_limit.
  void orthonormalize(const Eigen::MatrixXd& gram, double cond_limit = 1e12);
  bool orthonormalized() const { return ortho_.size() > 0; }
  // ortho member m = sum_k raw_to_ortho()(k,m) * raw member k
  const Eigen::MatrixXd& raw_to_ortho() const { return ortho_; }
  double gram_condition() const { return gram_condition_; }

  Vec2 value(int m, Vec2 p) const;
  double divergence(int m, Vec2 p) const;
  double normal_trace(int m, Vec2 p, Vec2 n) const { return dot(value(m, p), n); }
  void values(Vec2 p, Eigen::Ref<Eigen::Matrix2Xd> out) const;
  void divergences(Vec2 p, Eigen::Ref<Eigen::VectorXd> out) const;

private:
  struct Member {
    int comp; // 0: (m,0), 1: (0,m), 2: xi * m with m homogeneous
    int px, py;
  };

  VectorVariant variant_;
  int j_;
  Vec2 center_;
  double scale_;
  std::vector<Member> members_;
  Eigen::MatrixXd ortho_;
  double gram_condition_ = 1.0;
};

} // namespace wg
