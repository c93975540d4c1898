#pragma once

// Shared helpers and independent oracles for the unit and acceptance suites.
// The weak-gradient oracle deliberately re-derives everything from the
// defining equation: raw monomial members, its own quadrature exactness, and
// a dense full-pivot solve, so it shares no path with the production
// orthonormalize-and-factor construction it checks.

#include "wg/assembly.hpp"
#include "wg/mesh.hpp"
#include "wg/postprocess.hpp"
#include "wg/quadrature.hpp"
#include "wg/space.hpp"
#include "wg/weak_gradient.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace wgtest {

using namespace wg;

inline double ipow(double b, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// Raw member list mirroring the production ordering: (comp, px, py) with
// comp 2 meaning the Raviart-Thomas tip xi * xi^px eta^py.
struct OracleMember {
  int comp, px, py;
};

inline std::vector<OracleMember> oracle_members(VectorVariant variant, int j) {
  std::vector<OracleMember> members;
  const int scalar_deg = variant == VectorVariant::Full ? j + 1 : j;
  for (int comp = 0; comp < 2; ++comp)
    for (int d = 0; d <= scalar_deg; ++d)
      for (int px = d; px >= 0; --px) members.push_back({comp, px, d - px});
  if (variant == VectorVariant::RaviartThomas)
    for (int px = j; px >= 0; --px) members.push_back({2, px, j - px});
  return members;
}

inline Eigen::Vector2d oracle_value(const OracleMember& m, Vec2 p, Vec2 center, double scale) {
  double xi = (p.x - center.x) / scale;
  double eta = (p.y - center.y) / scale;
  double mono = ipow(xi, m.px) * ipow(eta, m.py);
  if (m.comp == 0) return {mono, 0.0};
  if (m.comp == 1) return {0.0, mono};
  return {xi * mono, eta * mono};
}

inline double oracle_divergence(const OracleMember& m, Vec2 p, Vec2 center, double scale) {
  double xi = (p.x - center.x) / scale;
  double eta = (p.y - center.y) / scale;
  if (m.comp == 0) return m.px == 0 ? 0.0 : m.px * ipow(xi, m.px - 1) * ipow(eta, m.py) / scale;
  if (m.comp == 1) return m.py == 0 ? 0.0 : m.py * ipow(xi, m.px) * ipow(eta, m.py - 1) / scale;
  return (m.px + m.py + 2) * ipow(xi, m.px) * ipow(eta, m.py) / scale;
}

// Brute-force weak-gradient matrix in raw monomial coordinates, from the
// defining equation with high-order quadrature and a dense solve.
inline Eigen::MatrixXd oracle_weak_gradient(const Mesh& mesh, int t, const WgSpace& space) {
  const TriInfo& tri = mesh.triangle(t);
  const Vec2 center = tri.centroid;
  const double scale = tri.diameter;
  const auto members = oracle_members(space.vector_variant(), space.interior_degree());
  const int nv = static_cast<int>(members.size());
  const int n0 = space.interior_dim();
  const int ne = space.edge_dim();
  const ScalarBasis& sbasis = ScalarBasis::cached(space.interior_degree());
  const EdgeBasis& ebasis = EdgeBasis::cached(space.edge_degree());

  const int vol_ex = 2 * (space.interior_degree() + 1) + 8;
  ElementQuad q = element_quad(mesh, t, triangle_rule(vol_ex));

  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(nv, nv);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nv, space.local_dim());
  Eigen::VectorXd svals(n0);
  for (int i = 0; i < q.size(); ++i) {
    sbasis.values(q.ref[i].x, q.ref[i].y, svals);
    for (int m = 0; m < nv; ++m) {
      Eigen::Vector2d vm = oracle_value(members[m], q.pts[i], center, scale);
      double dm = oracle_divergence(members[m], q.pts[i], center, scale);
      for (int n = 0; n < nv; ++n)
        mass(m, n) += q.w[i] * vm.dot(oracle_value(members[n], q.pts[i], center, scale));
      for (int s = 0; s < n0; ++s) rhs(m, s) -= q.w[i] * svals(s) * dm;
    }
  }

  const QuadratureRule& erule = edge_rule(2 * (space.interior_degree() + 1) + 8);
  Eigen::VectorXd evals(ne);
  for (int le = 0; le < 3; ++le) {
    EdgeQuad eq = edge_quad(mesh, tri.edge[le], erule);
    Vec2 n = tri.outward_normal[le];
    for (int i = 0; i < eq.size(); ++i) {
      ebasis.values(eq.t[i], evals);
      for (int m = 0; m < nv; ++m) {
        Eigen::Vector2d vm = oracle_value(members[m], eq.pts[i], center, scale);
        double trace = vm(0) * n.x + vm(1) * n.y;
        for (int k = 0; k < ne; ++k) rhs(m, n0 + le * ne + k) += eq.w[i] * trace * evals(k);
      }
    }
  }
  return mass.fullPivLu().solve(rhs);
}

// Production weak-gradient matrix expressed in the same raw monomial
// coordinates as the oracle.
inline Eigen::MatrixXd production_weak_gradient_raw(const LocalWeakGradient& lwg) {
  return lwg.basis.raw_to_ortho() * lwg.grad;
}

// Direct quadrature evaluation of the bilinear form
//   a(w,v) = (a grad_w w, grad_w v) - (b w_0, grad_w v) + (c w_0, v_0),
// independent of the assembled sparse matrix.
inline double direct_form_value(const ProblemSpec& problem, const Mesh& mesh,
                                const WgSpace& space, const LocalGradientSet& grads,
                                const WeakFunction& w, const WeakFunction& v) {
  const ScalarBasis& sbasis = ScalarBasis::cached(space.interior_degree());
  const int n0 = space.interior_dim();
  double total = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const LocalWeakGradient& lwg = grads[t];
    Eigen::VectorXd gw = lwg.apply(gather_local_dofs(w, mesh, t));
    Eigen::VectorXd gv = lwg.apply(gather_local_dofs(v, mesh, t));
    ElementQuad q = element_quad(mesh, t, triangle_rule(space.volume_exactness()));
    Eigen::Matrix2Xd vals(2, lwg.basis.dim());
    Eigen::VectorXd svals(n0);
    for (int i = 0; i < q.size(); ++i) {
      double x = q.pts[i].x, y = q.pts[i].y;
      lwg.basis.values(q.pts[i], vals);
      Eigen::Vector2d dw = vals * gw;
      Eigen::Vector2d dv = vals * gv;
      sbasis.values(q.ref[i].x, q.ref[i].y, svals);
      double w0 = svals.dot(w.interior(t));
      double v0 = svals.dot(v.interior(t));
      double acc = dv.dot(problem.a(x, y) * dw);
      Vec2 b = problem.b(x, y);
      acc -= w0 * (b.x * dv(0) + b.y * dv(1));
      acc += problem.c(x, y) * w0 * v0;
      total += q.w[i] * acc;
    }
  }
  return total;
}

// Residual of -div(a grad u) + div(b u) + c u - f by central differences of
// the expression fields; truncation dominates, so callers use a loose
// tolerance.
inline double pde_residual_fd(const ProblemSpec& p, double x, double y) {
  const double h = 1e-4;
  auto ux = [&](double px, double py) {
    return ((*p.exact_u)(px + h, py) - (*p.exact_u)(px - h, py)) / (2 * h);
  };
  auto uy = [&](double px, double py) {
    return ((*p.exact_u)(px, py + h) - (*p.exact_u)(px, py - h)) / (2 * h);
  };
  auto flux_x = [&](double px, double py) {
    return p.a11(px, py) * ux(px, py) + p.a12(px, py) * uy(px, py);
  };
  auto flux_y = [&](double px, double py) {
    return p.a12(px, py) * ux(px, py) + p.a22(px, py) * uy(px, py);
  };
  double div_flux = (flux_x(x + h, y) - flux_x(x - h, y)) / (2 * h) +
                    (flux_y(x, y + h) - flux_y(x, y - h)) / (2 * h);
  auto bu_x = [&](double px, double py) { return p.b1(px, py) * (*p.exact_u)(px, py); };
  auto bu_y = [&](double px, double py) { return p.b2(px, py) * (*p.exact_u)(px, py); };
  double div_bu =
      (bu_x(x + h, y) - bu_x(x - h, y)) / (2 * h) + (bu_y(x, y + h) - bu_y(x, y - h)) / (2 * h);
  return -div_flux + div_bu + p.c(x, y) * (*p.exact_u)(x, y) - p.f(x, y);
}

// (f, v_0) by direct quadrature.
inline double direct_load_value(const ProblemSpec& problem, const Mesh& mesh,
                                const WgSpace& space, const WeakFunction& v) {
  const ScalarBasis& sbasis = ScalarBasis::cached(space.interior_degree());
  const int n0 = space.interior_dim();
  double total = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    ElementQuad q = element_quad(mesh, t, triangle_rule(space.volume_exactness()));
    Eigen::VectorXd svals(n0);
    for (int i = 0; i < q.size(); ++i) {
      sbasis.values(q.ref[i].x, q.ref[i].y, svals);
      total += q.w[i] * problem.f(q.pts[i].x, q.pts[i].y) * svals.dot(v.interior(t));
    }
  }
  return total;
}

} // namespace wgtest
