#include "wg/postprocess.hpp"

#include "wg/parallel.hpp"
#include "wg/quadrature.hpp"

#include <cmath>
#include <limits>

namespace wg {

ErrorNorms error_norms(const WeakFunction& u_h, const ScalarField& exact, const Mesh& mesh,
                       const WgSpace& space, const LocalGradientSet& grads) {
  const int nt = mesh.num_triangles();
  WeakFunction qh_u = project_weak(exact, mesh, space);
  const ScalarBasis& sbasis = ScalarBasis::cached(space.interior_degree());
  const int n0 = space.interior_dim();

  std::vector<double> h1(nt), l2proj(nt), l2(nt);
  parallel_for(nt, [&](int t) {
    Eigen::VectorXd diff = gather_local_dofs(u_h, mesh, t) - gather_local_dofs(qh_u, mesh, t);
    Eigen::VectorXd gcoeff = grads[t].apply(diff);
    h1[t] = gcoeff.dot(grads[t].vmass * gcoeff);

    // Pulled-back orthonormal interior basis: elementwise L2 norm is the
    // coefficient norm scaled by the Jacobian.
    double det = 2.0 * mesh.triangle(t).area;
    l2proj[t] = det * (u_h.interior(t) - qh_u.interior(t)).squaredNorm();

    ElementQuad q = element_quad(mesh, t, triangle_rule(space.volume_exactness()));
    Eigen::VectorXd svals(n0);
    double acc = 0.0;
    for (int i = 0; i < q.size(); ++i) {
      sbasis.values(q.ref[i].x, q.ref[i].y, svals);
      double u0 = svals.dot(u_h.interior(t));
      double d = u0 - exact(q.pts[i].x, q.pts[i].y);
      acc += q.w[i] * d * d;
    }
    l2[t] = acc;
  });

  ErrorNorms norms;
  norms.h = mesh.max_diameter();
  norms.dofs = DofMap(mesh, space).total();
  double sh1 = 0.0, sl2p = 0.0, sl2 = 0.0;
  for (int t = 0; t < nt; ++t) {
    sh1 += h1[t];
    sl2p += l2proj[t];
    sl2 += l2[t];
  }
  norms.eH1 = std::sqrt(std::max(0.0, sh1));
  norms.eL2proj = std::sqrt(std::max(0.0, sl2p));
  norms.eL2 = std::sqrt(std::max(0.0, sl2));
  return norms;
}

Eigen::VectorXd numerical_flux_coeffs(const WeakFunction& u_h, const ProblemSpec& problem,
                                      const Mesh& mesh, int t, const WgSpace& space,
                                      const LocalWeakGradient& lwg) {
  Eigen::VectorXd gcoeff = lwg.apply(gather_local_dofs(u_h, mesh, t));
  const ScalarBasis& sbasis = ScalarBasis::cached(space.interior_degree());
  const int n0 = space.interior_dim();
  const int nv = lwg.basis.dim();

  ElementQuad q = element_quad(mesh, t, triangle_rule(space.volume_exactness()));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nv);
  Eigen::Matrix2Xd vals(2, nv);
  Eigen::VectorXd svals(n0);
  for (int i = 0; i < q.size(); ++i) {
    double x = q.pts[i].x, y = q.pts[i].y;
    lwg.basis.values(q.pts[i], vals);
    Eigen::Vector2d grad_w = vals * gcoeff;

    Eigen::Vector2d field = -(problem.a(x, y) * grad_w);
    if (problem.has_convection) {
      sbasis.values(q.ref[i].x, q.ref[i].y, svals);
      double u0 = svals.dot(u_h.interior(t));
      Vec2 b = problem.b(x, y);
      field(0) += b.x * u0;
      field(1) += b.y * u0;
    }
    rhs.noalias() += q.w[i] * (vals.transpose() * field);
  }
  return lwg.vmass_llt.solve(rhs);
}

double numerical_flux_trace(const Eigen::VectorXd& flux_coeffs, const Mesh& mesh, int t, int le,
                            double tpar, const LocalWeakGradient& lwg) {
  const TriInfo& tri = mesh.triangle(t);
  const EdgeInfo& edge = mesh.edge(tri.edge[le]);
  Vec2 p = mesh.vertex(edge.lo) + tpar * (mesh.vertex(edge.hi) - mesh.vertex(edge.lo));
  Eigen::Matrix2Xd vals(2, lwg.basis.dim());
  lwg.basis.values(p, vals);
  Eigen::Vector2d flux = vals * flux_coeffs;
  Vec2 n = tri.outward_normal[le];
  return flux(0) * n.x + flux(1) * n.y;
}

double conservation_residual(const WeakFunction& u_h, const ProblemSpec& problem, const Mesh& mesh,
                             int t, const WgSpace& space, const LocalWeakGradient& lwg) {
  Eigen::VectorXd flux = numerical_flux_coeffs(u_h, problem, mesh, t, space, lwg);
  const TriInfo& tri = mesh.triangle(t);

  double boundary_flux = 0.0;
  const QuadratureRule& erule = edge_rule(space.edge_exactness());
  for (int le = 0; le < 3; ++le) {
    EdgeQuad eq = edge_quad(mesh, tri.edge[le], erule);
    for (int i = 0; i < eq.size(); ++i)
      boundary_flux += eq.w[i] * numerical_flux_trace(flux, mesh, t, le, eq.t[i], lwg);
  }

  double volume = 0.0;
  ElementQuad q = element_quad(mesh, t, triangle_rule(space.volume_exactness()));
  const ScalarBasis& sbasis = ScalarBasis::cached(space.interior_degree());
  Eigen::VectorXd svals(space.interior_dim());
  for (int i = 0; i < q.size(); ++i) {
    double x = q.pts[i].x, y = q.pts[i].y;
    double cu = 0.0;
    if (problem.has_reaction) {
      sbasis.values(q.ref[i].x, q.ref[i].y, svals);
      cu = problem.c(x, y) * svals.dot(u_h.interior(t));
    }
    volume += q.w[i] * (cu - problem.f(x, y));
  }
  return std::abs(boundary_flux + volume);
}

double conservation_scale(const ProblemSpec& problem, const Mesh& mesh, int t,
                          const WgSpace& space) {
  ElementQuad q = element_quad(mesh, t, triangle_rule(space.volume_exactness()));
  double fmax = 0.0;
  for (int i = 0; i < q.size(); ++i)
    fmax = std::max(fmax, std::abs(problem.f(q.pts[i].x, q.pts[i].y)));
  return mesh.triangle(t).area * fmax + 1.0;
}

FluxReport flux_report(const WeakFunction& u_h, const ProblemSpec& problem, const Mesh& mesh,
                       const WgSpace& space, const LocalGradientSet& grads) {
  const int nt = mesh.num_triangles();
  FluxReport report;
  report.element_residual.resize(nt);
  report.element_scale.resize(nt);

  std::vector<Eigen::VectorXd> flux(nt);
  parallel_for(nt, [&](int t) {
    flux[t] = numerical_flux_coeffs(u_h, problem, mesh, t, space, grads[t]);
    report.element_residual[t] = conservation_residual(u_h, problem, mesh, t, space, grads[t]);
    report.element_scale[t] = conservation_scale(problem, mesh, t, space);
  });

  std::vector<int> interior;
  for (int e = 0; e < mesh.num_edges(); ++e)
    if (!mesh.edge(e).boundary) interior.push_back(e);
  const int nie = static_cast<int>(interior.size());
  report.interior_edge = interior;
  report.edge_jump.resize(nie);
  report.edge_scale.resize(nie);

  const QuadratureRule& erule = edge_rule(2 * (space.interior_degree() + 1) + 2);
  parallel_for(nie, [&](int k) {
    int e = interior[k];
    const EdgeInfo& edge = mesh.edge(e);
    std::array<int, 2> le{-1, -1};
    for (int side = 0; side < 2; ++side) {
      const TriInfo& tri = mesh.triangle(edge.tri[side]);
      for (int j = 0; j < 3; ++j)
        if (tri.edge[j] == e) le[side] = j;
    }
    // Outward traces from the two sides; continuity makes them opposite, so
    // the jump is their sum.
    double jump2 = 0.0, n1 = 0.0, n2 = 0.0;
    for (int i = 0; i < erule.size(); ++i) {
      double tpar = erule.x[i];
      double w = erule.w[i] * edge.length;
      double f1 = numerical_flux_trace(flux[edge.tri[0]], mesh, edge.tri[0], le[0], tpar,
                                       grads[edge.tri[0]]);
      double f2 = numerical_flux_trace(flux[edge.tri[1]], mesh, edge.tri[1], le[1], tpar,
                                       grads[edge.tri[1]]);
      jump2 += w * (f1 + f2) * (f1 + f2);
      n1 += w * f1 * f1;
      n2 += w * f2 * f2;
    }
    report.edge_jump[k] = std::sqrt(jump2);
    report.edge_scale[k] = 1.0 + std::sqrt(std::max(n1, n2));
  });

  double sum_res = 0.0, sum_jump = 0.0;
  for (int t = 0; t < nt; ++t) {
    double ratio = report.element_residual[t] / report.element_scale[t];
    report.max_residual_ratio = std::max(report.max_residual_ratio, ratio);
    sum_res += ratio;
  }
  report.mean_residual_ratio = nt > 0 ? sum_res / nt : 0.0;
  for (int k = 0; k < nie; ++k) {
    double ratio = report.edge_jump[k] / report.edge_scale[k];
    report.max_jump_ratio = std::max(report.max_jump_ratio, ratio);
    sum_jump += ratio;
  }
  report.mean_jump_ratio = nie > 0 ? sum_jump / nie : 0.0;
  return report;
}

std::vector<StepRate> step_rates(const std::vector<double>& h, const std::vector<double>& err,
                                 double exact_threshold) {
  std::vector<StepRate> rates;
  for (size_t k = 0; k + 1 < h.size(); ++k) {
    StepRate r;
    if (err[k] <= exact_threshold || err[k + 1] <= exact_threshold)
      r.exact = true;
    else
      r.rate = std::log(err[k] / err[k + 1]) / std::log(h[k] / h[k + 1]);
    rates.push_back(r);
  }
  return rates;
}

double ls_slope(const std::vector<double>& h, const std::vector<double>& err,
                double exact_threshold) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (size_t k = 0; k < h.size(); ++k) {
    if (err[k] <= exact_threshold) continue;
    double x = std::log(h[k]), y = std::log(err[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace wg
