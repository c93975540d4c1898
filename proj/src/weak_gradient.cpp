#include "wg/weak_gradient.hpp"

#include "wg/parallel.hpp"

#include <Eigen/SVD>

namespace wg {

ElementQuad element_quad(const Mesh& mesh, int t, const QuadratureRule& rule) {
  auto c = mesh.corners(t);
  const double det = 2.0 * mesh.triangle(t).area;
  ElementQuad q;
  q.pts.resize(rule.size());
  q.ref.resize(rule.size());
  q.w.resize(rule.size());
  for (int i = 0; i < rule.size(); ++i) {
    double xr = rule.x[i], yr = rule.y[i];
    q.ref[i] = {xr, yr};
    q.pts[i] = c[0] + xr * (c[1] - c[0]) + yr * (c[2] - c[0]);
    q.w[i] = rule.w[i] * det;
  }
  return q;
}

EdgeQuad edge_quad(const Mesh& mesh, int e, const QuadratureRule& rule) {
  const EdgeInfo& edge = mesh.edge(e);
  Vec2 lo = mesh.vertex(edge.lo), hi = mesh.vertex(edge.hi);
  EdgeQuad q;
  q.pts.resize(rule.size());
  q.t.resize(rule.size());
  q.w.resize(rule.size());
  for (int i = 0; i < rule.size(); ++i) {
    q.t[i] = rule.x[i];
    q.pts[i] = lo + rule.x[i] * (hi - lo);
    q.w[i] = rule.w[i] * edge.length;
  }
  return q;
}

Eigen::VectorXd project_q0(const ScalarField& u, const Mesh& mesh, int t, int degree,
                           int exactness) {
  const ScalarBasis& basis = ScalarBasis::cached(degree);
  const QuadratureRule& rule = triangle_rule(exactness);
  ElementQuad q = element_quad(mesh, t, rule);
  const double det = 2.0 * mesh.triangle(t).area;

  // The pulled-back basis is orthonormal up to the factor det, so the local
  // mass solve collapses to a scaled moment computation.
  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(basis.dim());
  Eigen::VectorXd vals(basis.dim());
  for (int i = 0; i < q.size(); ++i) {
    basis.values(q.ref[i].x, q.ref[i].y, vals);
    coeff += (q.w[i] * u(q.pts[i].x, q.pts[i].y)) * vals;
  }
  return coeff / det;
}

Eigen::VectorXd project_qb(const ScalarField& g, const Mesh& mesh, int e, int degree,
                           int exactness) {
  const EdgeBasis& basis = EdgeBasis::cached(degree);
  const QuadratureRule& rule = edge_rule(exactness);
  EdgeQuad q = edge_quad(mesh, e, rule);
  const double len = mesh.edge(e).length;

  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(basis.dim());
  Eigen::VectorXd vals(basis.dim());
  for (int i = 0; i < q.size(); ++i) {
    basis.values(q.t[i], vals);
    coeff += (q.w[i] * g(q.pts[i].x, q.pts[i].y)) * vals;
  }
  return coeff / len;
}

LocalWeakGradient build_local_weak_gradient(const Mesh& mesh, int t, const WgSpace& space) {
  const TriInfo& tri = mesh.triangle(t);
  const ScalarBasis& sbasis = ScalarBasis::cached(space.interior_degree());
  const EdgeBasis& ebasis = EdgeBasis::cached(space.edge_degree());
  const int n0 = space.interior_dim();
  const int ne = space.edge_dim();
  const int nloc = space.local_dim();

  LocalWeakGradient lwg;
  lwg.tri = t;
  lwg.basis = VectorBasis(space.vector_variant(), space.interior_degree(), tri.centroid,
                          tri.diameter);
  const int nv = lwg.basis.dim();

  ElementQuad vq = element_quad(mesh, t, triangle_rule(space.volume_exactness()));

  // Gram of the raw members and the interior part of the right-hand side
  //   B(m, i) = -int_T phi_i div(q_m)
  // are exact at this exactness since all integrands are polynomial.
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(nv, nv);
  Eigen::MatrixXd b_raw = Eigen::MatrixXd::Zero(nv, nloc);
  Eigen::Matrix2Xd vals(2, nv);
  Eigen::VectorXd divs(nv), svals(n0);
  for (int i = 0; i < vq.size(); ++i) {
    lwg.basis.raw_values(vq.pts[i], vals);
    lwg.basis.raw_divergences(vq.pts[i], divs);
    sbasis.values(vq.ref[i].x, vq.ref[i].y, svals);
    gram.noalias() += vq.w[i] * (vals.transpose() * vals);
    b_raw.leftCols(n0).noalias() -= (vq.w[i] * divs) * svals.transpose();
  }

  //   B(m, (le,k)) = int_e psi_k (q_m . n_out)
  // with psi parametrized in the global edge direction; orientation enters
  // only through the outward normal.
  const QuadratureRule& erule = edge_rule(space.edge_exactness());
  Eigen::VectorXd evals(ne);
  for (int le = 0; le < 3; ++le) {
    EdgeQuad eq = edge_quad(mesh, tri.edge[le], erule);
    Vec2 n = tri.outward_normal[le];
    for (int i = 0; i < eq.size(); ++i) {
      lwg.basis.raw_values(eq.pts[i], vals);
      ebasis.values(eq.t[i], evals);
      Eigen::RowVectorXd trace = n.x * vals.row(0) + n.y * vals.row(1);
      b_raw.block(0, n0 + le * ne, nv, ne).noalias() +=
          eq.w[i] * trace.transpose() * evals.transpose();
    }
  }

  lwg.basis.orthonormalize(gram);
  const Eigen::MatrixXd& c = lwg.basis.raw_to_ortho();
  lwg.vmass = c.transpose() * gram * c;
  lwg.vmass_llt.compute(lwg.vmass);
  lwg.grad = lwg.vmass_llt.solve(c.transpose() * b_raw);
  return lwg;
}

Eigen::VectorXd project_rh(const VectorField& field, const Mesh& mesh, int t,
                           const LocalWeakGradient& lwg, int exactness) {
  ElementQuad q = element_quad(mesh, t, triangle_rule(exactness));
  const int nv = lwg.basis.dim();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nv);
  Eigen::Matrix2Xd vals(2, nv);
  for (int i = 0; i < q.size(); ++i) {
    lwg.basis.values(q.pts[i], vals);
    Vec2 f = field(q.pts[i].x, q.pts[i].y);
    rhs.noalias() += q.w[i] * (f.x * vals.row(0) + f.y * vals.row(1)).transpose();
  }
  return lwg.vmass_llt.solve(rhs);
}

LocalGradientSet::LocalGradientSet(const Mesh& mesh, const WgSpace& space) {
  grads_.resize(mesh.num_triangles());
  parallel_for(mesh.num_triangles(), [&](int t) {
    grads_[t] = std::make_unique<const LocalWeakGradient>(build_local_weak_gradient(mesh, t, space));
  });
}

KernelInfo weak_gradient_kernel(const LocalWeakGradient& lwg, double rel_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(lwg.grad, Eigen::ComputeFullV);
  KernelInfo info;
  info.singular_values = svd.singularValues();
  double smax = info.singular_values.size() > 0 ? info.singular_values(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < info.singular_values.size(); ++i)
    if (info.singular_values(i) > rel_tol * smax) ++rank;
  const int nloc = static_cast<int>(lwg.grad.cols());
  info.dim = nloc - rank;
  info.null_basis = svd.matrixV().rightCols(info.dim);
  return info;
}

Eigen::VectorXd constant_weak_dofs(const WgSpace& space) {
  const ScalarBasis& sbasis = ScalarBasis::cached(space.interior_degree());
  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(space.local_dim());
  // First member of either basis is the constant one.
  dofs(0) = 1.0 / sbasis.monomial_coeffs()(0, 0);
  for (int le = 0; le < 3; ++le) dofs(space.interior_dim() + le * space.edge_dim()) = 1.0;
  return dofs;
}

Eigen::VectorXd gather_local_dofs(const WeakFunction& wf, const Mesh& mesh, int t) {
  const TriInfo& tri = mesh.triangle(t);
  const int n0 = wf.interior_dim();
  const int ne = wf.edge_dim();
  Eigen::VectorXd local(n0 + 3 * ne);
  local.head(n0) = wf.interior(t);
  for (int le = 0; le < 3; ++le) local.segment(n0 + le * ne, ne) = wf.edge(tri.edge[le]);
  return local;
}

WeakFunction project_weak(const ScalarField& u, const Mesh& mesh, const WgSpace& space) {
  WeakFunction wf(mesh, space);
  parallel_for(mesh.num_triangles(), [&](int t) {
    wf.interior(t) = project_q0(u, mesh, t, space.interior_degree(), space.volume_exactness());
  });
  parallel_for(mesh.num_edges(), [&](int e) {
    wf.edge(e) = project_qb(u, mesh, e, space.edge_degree(), space.edge_exactness());
  });
  return wf;
}

} // namespace wg
