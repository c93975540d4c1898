#include "test_support.hpp"
#include "wg/config.hpp"
#include "wg/study.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace wg;

namespace {

LoadedProblem builtin(const char* name) {
  ProblemConfig cfg;
  cfg.problem_name = name;
  cfg.expressions = builtin_problems().at(name);
  return LoadedProblem{cfg, spec_from_config(cfg)};
}

struct Solved {
  Mesh mesh;
  WgSpace space;
  LocalGradientSet grads;
  WeakFunction u;
};

Solved solve_builtin(const char* name, int n, Family family, int j) {
  LoadedProblem lp = builtin(name);
  Mesh mesh = Mesh::unit_square(n);
  WgSpace space(family, j);
  LocalGradientSet grads(mesh, space);
  AssembledSystem sys = assemble(lp.spec, mesh, space, grads);
  WeakFunction u = solve(sys, mesh, space);
  return Solved{std::move(mesh), space, std::move(grads), std::move(u)};
}

} // namespace

TEST_CASE("error norms vanish when the solution equals the projection") {
  Mesh mesh = Mesh::unit_square(2);
  WgSpace space(Family::Full, 1);
  LocalGradientSet grads(mesh, space);
  ScalarField u = [](double x, double y) { return 1.0 + 2.0 * x - 3.0 * y; };
  WeakFunction qhu = project_weak(u, mesh, space);
  ErrorNorms norms = error_norms(qhu, u, mesh, space, grads);
  CHECK(norms.eH1 <= 1e-12);
  CHECK(norms.eL2proj <= 1e-12);
  CHECK(norms.eL2 <= 1e-12); // linear u lies in P_1, so u_0 == u
  CHECK(norms.dofs == DofMap(mesh, space).total());
}

TEST_CASE("error norms scale linearly") {
  Solved s = solve_builtin("sinsin", 4, Family::Full, 0);
  LoadedProblem lp = builtin("sinsin");
  ErrorNorms base = error_norms(s.u, *lp.spec.exact_u, s.mesh, s.space, s.grads);

  const double alpha = -2.5;
  WeakFunction scaled(s.mesh, s.space);
  scaled.coeffs() = alpha * s.u.coeffs();
  ScalarField su = [&lp, alpha](double x, double y) {
    return alpha * (*lp.spec.exact_u)(x, y);
  };
  ErrorNorms got = error_norms(scaled, su, s.mesh, s.space, s.grads);
  CHECK(got.eH1 == doctest::Approx(std::abs(alpha) * base.eH1).epsilon(1e-12));
  CHECK(got.eL2proj == doctest::Approx(std::abs(alpha) * base.eL2proj).epsilon(1e-12));
  CHECK(got.eL2 == doctest::Approx(std::abs(alpha) * base.eL2).epsilon(1e-12));
}

TEST_CASE("rate estimation") {
  SUBCASE("textbook step rate") {
    auto rates = step_rates({1.0 / 8, 1.0 / 16}, {1e-2, 2.5e-3});
    REQUIRE(rates.size() == 1);
    CHECK(!rates[0].exact);
    CHECK(rates[0].rate == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("exact geometric sequence has least-squares slope 3") {
    std::vector<double> h{0.5, 0.25, 0.125, 0.0625};
    std::vector<double> e;
    for (double hv : h) e.push_back(7.3 * hv * hv * hv);
    CHECK(ls_slope(h, e) == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("least-squares slope lies between the extreme step rates") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> noise(0.8, 1.25);
    std::vector<double> h{0.5, 0.25, 0.125, 0.0625, 0.03125};
    std::vector<double> e;
    for (double hv : h) e.push_back(noise(rng) * hv * hv);
    auto rates = step_rates(h, e);
    double lo = rates[0].rate, hi = rates[0].rate;
    for (const auto& r : rates) {
      lo = std::min(lo, r.rate);
      hi = std::max(hi, r.rate);
    }
    double slope = ls_slope(h, e);
    CHECK(slope >= lo - 1e-12);
    CHECK(slope <= hi + 1e-12);
  }
  SUBCASE("errors at the exact threshold produce no rate") {
    auto rates = step_rates({0.5, 0.25}, {1e-12, 1e-13});
    REQUIRE(rates.size() == 1);
    CHECK(rates[0].exact);
    CHECK(std::isnan(ls_slope({0.5, 0.25}, {1e-12, 1e-13})));
  }
}

TEST_CASE("conservation holds elementwise for solved problems") {
  for (const char* name : {"sinsin", "convection"}) {
    LoadedProblem lp = builtin(name);
    Solved s = solve_builtin(name, 8, Family::Full, 0);
    for (int t = 0; t < s.mesh.num_triangles(); ++t) {
      double res = conservation_residual(s.u, lp.spec, s.mesh, t, s.space, s.grads[t]);
      double scale = conservation_scale(lp.spec, s.mesh, t, s.space);
      CHECK(res <= 1e-9 * scale);
    }
  }
}

TEST_CASE("conservation check is not vacuous: random coefficients fail it") {
  LoadedProblem lp = builtin("sinsin");
  Mesh mesh = Mesh::unit_square(4);
  WgSpace space(Family::Full, 0);
  LocalGradientSet grads(mesh, space);
  WeakFunction junk(mesh, space);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < junk.coeffs().size(); ++i) junk.coeffs()(i) = unit(rng);
  double worst = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t)
    worst = std::max(worst, conservation_residual(junk, lp.spec, mesh, t, space, grads[t]) /
                                conservation_scale(lp.spec, mesh, t, space));
  CHECK(worst > 1e-6);
}

TEST_CASE("flux of the reproduced linear solution is the constant normal derivative") {
  LoadedProblem lp = builtin("linear"); // u = 1 + 2x - 3y, f = 0, c = 0
  Solved s = solve_builtin("linear", 2, Family::Full, 0);
  for (int t = 0; t < s.mesh.num_triangles(); ++t) {
    Eigen::VectorXd flux =
        numerical_flux_coeffs(s.u, lp.spec, s.mesh, t, s.space, s.grads[t]);
    const TriInfo& tri = s.mesh.triangle(t);
    for (int le = 0; le < 3; ++le) {
      Vec2 n = tri.outward_normal[le];
      double want = -(2.0 * n.x - 3.0 * n.y); // -grad(u).n
      for (double tpar : {0.2, 0.5, 0.9}) {
        double got = numerical_flux_trace(flux, s.mesh, t, le, tpar, s.grads[t]);
        CHECK(std::abs(got - want) < 1e-9);
      }
    }

    // f = 0, c = 0: outward flux integrates to zero around each element
    double res = conservation_residual(s.u, lp.spec, s.mesh, t, s.space, s.grads[t]);
    CHECK(res <= 1e-10);
  }
}

TEST_CASE("flux traces from the two sides of an interior edge agree sign-adjusted") {
  for (const char* name : {"sinsin", "convection"}) {
    LoadedProblem lp = builtin(name);
    Solved s = solve_builtin(name, 4, Family::Full, 0);
    FluxReport report = flux_report(s.u, lp.spec, s.mesh, s.space, s.grads);
    CHECK(report.max_jump_ratio <= 1e-9);
    CHECK(report.max_residual_ratio <= 1e-9);
    CHECK(report.interior_edge.size() + s.mesh.num_boundary_edges() ==
          static_cast<size_t>(s.mesh.num_edges()));
  }
}

TEST_CASE("flux with convection matches a direct projection oracle") {
  LoadedProblem lp = builtin("convection");
  Solved s = solve_builtin("convection", 2, Family::Full, 1);
  const ScalarBasis& sbasis = ScalarBasis::cached(s.space.interior_degree());

  for (int t = 0; t < s.mesh.num_triangles(); ++t) {
    const LocalWeakGradient& lwg = s.grads[t];
    Eigen::VectorXd flux = numerical_flux_coeffs(s.u, lp.spec, s.mesh, t, s.space, lwg);

    // Oracle: project -a grad_w u_h + b u_0 onto the raw monomial members by
    // dense normal equations at high exactness, then compare pointwise.
    auto members = wgtest::oracle_members(s.space.vector_variant(), s.space.interior_degree());
    const int nv = static_cast<int>(members.size());
    const TriInfo& tri = s.mesh.triangle(t);
    ElementQuad q = element_quad(s.mesh, t, triangle_rule(14));
    Eigen::VectorXd gcoeff = lwg.apply(gather_local_dofs(s.u, s.mesh, t));
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(nv, nv);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nv);
    Eigen::Matrix2Xd vals(2, lwg.basis.dim());
    Eigen::VectorXd svals(s.space.interior_dim());
    for (int i = 0; i < q.size(); ++i) {
      lwg.basis.values(q.pts[i], vals);
      Eigen::Vector2d gw = vals * gcoeff;
      sbasis.values(q.ref[i].x, q.ref[i].y, svals);
      double u0 = svals.dot(s.u.interior(t));
      Vec2 b = lp.spec.b(q.pts[i].x, q.pts[i].y);
      Eigen::Vector2d field = -(lp.spec.a(q.pts[i].x, q.pts[i].y) * gw);
      field(0) += b.x * u0;
      field(1) += b.y * u0;
      for (int m = 0; m < nv; ++m) {
        Eigen::Vector2d vm = wgtest::oracle_value(members[m], q.pts[i], tri.centroid,
                                                  tri.diameter);
        for (int n2 = 0; n2 < nv; ++n2)
          mass(m, n2) += q.w[i] * vm.dot(wgtest::oracle_value(members[n2], q.pts[i],
                                                              tri.centroid, tri.diameter));
        rhs(m) += q.w[i] * vm.dot(field);
      }
    }
    Eigen::VectorXd oracle = mass.fullPivLu().solve(rhs);

    for (Vec2 p : {tri.centroid, Vec2{0.6 * tri.centroid.x, 0.6 * tri.centroid.y}}) {
      lwg.basis.values(p, vals);
      Eigen::Vector2d got = vals * flux;
      Eigen::Vector2d want = Eigen::Vector2d::Zero();
      for (int m = 0; m < nv; ++m) {
        Eigen::Vector2d vm = wgtest::oracle_value(members[m], p, tri.centroid, tri.diameter);
        want += oracle(m) * vm;
      }
      CHECK((got - want).norm() <= 1e-10 * (1.0 + want.norm()));
    }
  }
}
