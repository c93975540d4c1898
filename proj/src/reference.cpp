#include "wg/reference.hpp"

#include "wg/quadrature.hpp"

#include <cmath>

namespace wg::ref {

std::vector<LocalWeakGradient> local_gradients(const Mesh& mesh, const WgSpace& space) {
  std::vector<LocalWeakGradient> grads;
  grads.reserve(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t)
    grads.push_back(build_local_weak_gradient(mesh, t, space));
  return grads;
}

AssembledSystem assemble(const ProblemSpec& problem, const Mesh& mesh, const WgSpace& space,
                         const std::vector<LocalWeakGradient>& grads,
                         const AssemblyOptions& options) {
  DofMap dofs(mesh, space);
  AssembledSystem out{Eigen::SparseMatrix<double>(dofs.free_count(), dofs.free_count()),
                      Eigen::VectorXd::Zero(dofs.free_count()),
                      apply_dirichlet(problem, mesh, space, dofs),
                      !problem.has_convection,
                      dofs};

  std::vector<Eigen::Triplet<double>> triplets;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    ElementSystem sys = element_system(problem, mesh, t, space, grads[t]);
    if (t == options.perturb_element) sys.stiffness *= options.perturb_scale;
    std::vector<int> gdofs = dofs.element_dofs(mesh, t);
    for (size_t r = 0; r < gdofs.size(); ++r) {
      int fr = dofs.free_index(gdofs[r]);
      if (fr < 0) continue;
      out.rhs(fr) += sys.load(static_cast<Eigen::Index>(r));
      for (size_t c = 0; c < gdofs.size(); ++c) {
        int fc = dofs.free_index(gdofs[c]);
        double v = sys.stiffness(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        if (fc >= 0)
          triplets.emplace_back(fr, fc, v);
        else
          out.rhs(fr) -= v * out.lift(gdofs[c]);
      }
    }
  }
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix.makeCompressed();
  return out;
}

ErrorNorms error_norms(const WeakFunction& u_h, const ScalarField& exact, const Mesh& mesh,
                       const WgSpace& space, const std::vector<LocalWeakGradient>& grads) {
  // Same per-element quantities as the parallel version, accumulated in the
  // same ascending element order.
  WeakFunction qh_u(mesh, space);
  for (int t = 0; t < mesh.num_triangles(); ++t)
    qh_u.interior(t) = project_q0(exact, mesh, t, space.interior_degree(),
                                  space.volume_exactness());
  for (int e = 0; e < mesh.num_edges(); ++e)
    qh_u.edge(e) = project_qb(exact, mesh, e, space.edge_degree(), space.edge_exactness());

  const ScalarBasis& sbasis = ScalarBasis::cached(space.interior_degree());
  const int n0 = space.interior_dim();
  double sh1 = 0.0, sl2p = 0.0, sl2 = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    Eigen::VectorXd diff = gather_local_dofs(u_h, mesh, t) - gather_local_dofs(qh_u, mesh, t);
    Eigen::VectorXd gcoeff = grads[t].apply(diff);
    sh1 += gcoeff.dot(grads[t].vmass * gcoeff);

    double det = 2.0 * mesh.triangle(t).area;
    sl2p += det * (u_h.interior(t) - qh_u.interior(t)).squaredNorm();

    ElementQuad q = element_quad(mesh, t, triangle_rule(space.volume_exactness()));
    Eigen::VectorXd svals(n0);
    double acc = 0.0;
    for (int i = 0; i < q.size(); ++i) {
      sbasis.values(q.ref[i].x, q.ref[i].y, svals);
      double u0 = svals.dot(u_h.interior(t));
      double d = u0 - exact(q.pts[i].x, q.pts[i].y);
      acc += q.w[i] * d * d;
    }
    sl2 += acc;
  }

  ErrorNorms norms;
  norms.h = mesh.max_diameter();
  norms.dofs = DofMap(mesh, space).total();
  norms.eH1 = std::sqrt(std::max(0.0, sh1));
  norms.eL2proj = std::sqrt(std::max(0.0, sl2p));
  norms.eL2 = std::sqrt(std::max(0.0, sl2));
  return norms;
}

} // namespace wg::ref
