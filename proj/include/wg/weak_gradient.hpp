#pragma once

#include "wg/basis.hpp"
#include "wg/fields.hpp"
#include "wg/mesh.hpp"
#include "wg/quadrature.hpp"
#include "wg/space.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace wg {

// Physical quadrature data on one triangle: points in physical and reference
// coordinates, weights carrying the Jacobian.
struct ElementQuad {
  std::vector<Vec2> pts;
  std::vector<Vec2> ref;
  std::vector<double> w;
  int size() const { return static_cast<int>(w.size()); }
};
ElementQuad element_quad(const Mesh& mesh, int t, const QuadratureRule& rule);

// Quadrature along one edge in global (lo->hi) parametrization; weights carry
// the edge length.
struct EdgeQuad {
  std::vector<Vec2> pts;
  std::vector<double> t;
  std::vector<double> w;
  int size() const { return static_cast<int>(w.size()); }
};
EdgeQuad edge_quad(const Mesh& mesh, int e, const QuadratureRule& rule);

// L2 projection of a scalar field onto P_degree on triangle t, coefficients in
// the pulled-back orthonormal reference basis.
Eigen::VectorXd project_q0(const ScalarField& u, const Mesh& mesh, int t, int degree,
                           int exactness);

// L2 projection onto P_degree along edge e, in the global edge direction.
Eigen::VectorXd project_qb(const ScalarField& g, const Mesh& mesh, int e, int degree,
                           int exactness);

// Per-element map from local weak DOFs (interior block, then the three edge
// blocks) to the coefficients of the discrete weak gradient in the
// orthonormalized gradient-space basis.
struct LocalWeakGradient {
  int tri = -1;
  VectorBasis basis;
  Eigen::MatrixXd grad;                  // gradient_dim x local_dim
  Eigen::MatrixXd vmass;                 // Gram of the orthonormalized basis
  Eigen::LLT<Eigen::MatrixXd> vmass_llt;

  LocalWeakGradient() : basis(VectorVariant::Full, 0) {}

  Eigen::VectorXd apply(const Eigen::VectorXd& local_dofs) const { return grad * local_dofs; }
  // L2(T) norm of the vector polynomial with the given coefficients.
  double coeff_norm(const Eigen::VectorXd& vcoeffs) const {
    double q = vcoeffs.dot(vmass * vcoeffs);
    return q > 0.0 ? std::sqrt(q) : 0.0;
  }
};

LocalWeakGradient build_local_weak_gradient(const Mesh& mesh, int t, const WgSpace& space);

// L2 projection of a vector field into the gradient space of one element,
// using the same quadrature exactness as the weak-gradient construction.
Eigen::VectorXd project_rh(const VectorField& q, const Mesh& mesh, int t,
                           const LocalWeakGradient& lwg, int exactness);

// All local weak gradients of a mesh; element-independent, built in parallel.
class LocalGradientSet {
public:
  LocalGradientSet(const Mesh& mesh, const WgSpace& space);
  const LocalWeakGradient& operator[](int t) const { return *grads_[t]; }
  int size() const { return static_cast<int>(grads_.size()); }

private:
  std::vector<std::unique_ptr<const LocalWeakGradient>> grads_;
};

// Numerical null space of the local weak-gradient map.
struct KernelInfo {
  int dim = 0;
  Eigen::VectorXd singular_values;
  Eigen::MatrixXd null_basis; // local_dim x dim
};
KernelInfo weak_gradient_kernel(const LocalWeakGradient& lwg, double rel_tol = 1e-10);

// Local DOF vector of the constant weak function v == 1.
Eigen::VectorXd constant_weak_dofs(const WgSpace& space);

// Local DOF vector of a weak function on element t.
Eigen::VectorXd gather_local_dofs(const WeakFunction& wf, const Mesh& mesh, int t);

// Elementwise projection Q_h u = {Q_0 u, Q_b u} over the whole mesh.
WeakFunction project_weak(const ScalarField& u, const Mesh& mesh, const WgSpace& space);

} // namespace wg
