#include "wg/mesh.hpp"
#include "wg/quadrature.hpp"
#include "wg/space.hpp"
#include "wg/weak_gradient.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace wg;

namespace {

const Mesh& reference_triangle() {
  static Mesh mesh = Mesh::from_vertices({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  return mesh;
}

double eval_interior(const Eigen::VectorXd& coeff, const ScalarBasis& basis, double xr,
                     double yr) {
  Eigen::VectorXd vals(basis.dim());
  basis.values(xr, yr, vals);
  return vals.dot(coeff);
}

} // namespace

TEST_CASE("interior projection reproduces polynomials of the target degree") {
  Mesh mesh = Mesh::from_vertices({{0.1, 0.2}, {1.4, 0.3}, {0.6, 1.2}}, {{0, 1, 2}});
  for (int j : {0, 1, 2}) {
    const ScalarBasis& basis = ScalarBasis::cached(j);
    ScalarField u = [j](double x, double y) {
      double v = 1.0;
      for (int k = 1; k <= j; ++k) v += std::pow(x, k) - 0.5 * std::pow(y, k);
      if (j >= 2) v += 0.25 * x * y;
      return v;
    };
    Eigen::VectorXd coeff = project_q0(u, mesh, 0, j, 2 * j + 3);
    ElementQuad q = element_quad(mesh, 0, triangle_rule(6));
    for (int i = 0; i < q.size(); ++i) {
      double got = eval_interior(coeff, basis, q.ref[i].x, q.ref[i].y);
      CHECK(std::abs(got - u(q.pts[i].x, q.pts[i].y)) < 1e-12);
    }
  }
}

TEST_CASE("interior projection of sin(x) at degree zero is the scaled mean") {
  const Mesh& mesh = reference_triangle();
  ScalarField u = [](double x, double) { return std::sin(x); };
  Eigen::VectorXd coeff = project_q0(u, mesh, 0, 0, 16);

  // dense quadrature oracle for the integral of sin(x)
  const QuadratureRule& rule = triangle_rule(20);
  double integral = 0.0;
  for (int i = 0; i < rule.size(); ++i) integral += rule.w[i] * std::sin(rule.x[i]);
  // one basis member sqrt(2): coefficient = mean / sqrt(2) = sqrt(2) * integral
  CHECK(coeff.size() == 1);
  CHECK(std::abs(coeff(0) - std::sqrt(2.0) * integral) < 1e-12);

  Eigen::VectorXd zero = project_q0([](double, double) { return 0.0; }, mesh, 0, 2, 7);
  CHECK(zero.norm() == 0.0);
}

TEST_CASE("edge projection reproduces edge polynomials and fits x^2") {
  Mesh mesh = Mesh::from_vertices({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  int bottom = -1;
  for (int e = 0; e < mesh.num_edges(); ++e)
    if (mesh.vertex(mesh.edge(e).lo).y == 0.0 && mesh.vertex(mesh.edge(e).hi).y == 0.0)
      bottom = e;
  REQUIRE(bottom >= 0);

  SUBCASE("reproduction of a degree-2 trace") {
    ScalarField g = [](double x, double y) { return 1.0 + 2.0 * x - x * x + y; };
    Eigen::VectorXd coeff = project_qb(g, mesh, bottom, 2, 7);
    const EdgeBasis& basis = EdgeBasis::cached(2);
    for (double t : {0.0, 0.3, 0.71, 1.0}) {
      double got = 0.0;
      for (int k = 0; k < 3; ++k) got += coeff(k) * basis.value(k, t);
      CHECK(std::abs(got - g(t, 0.0)) < 1e-12);
    }
  }

  SUBCASE("best linear fit of x^2 on the unit bottom edge") {
    ScalarField g = [](double x, double) { return x * x; };
    Eigen::VectorXd coeff = project_qb(g, mesh, bottom, 1, 9);
    // 1D oracle: c_k = int_0^1 t^2 psi_k(t) dt with psi_0 = 1,
    // psi_1 = sqrt(3)(2t-1).
    CHECK(std::abs(coeff(0) - 1.0 / 3.0) < 1e-12);
    CHECK(std::abs(coeff(1) - std::sqrt(3.0) * (0.5 - 1.0 / 3.0)) < 1e-12);
  }

  SUBCASE("zero field") {
    Eigen::VectorXd coeff = project_qb([](double, double) { return 0.0; }, mesh, bottom, 3, 9);
    CHECK(coeff.norm() == 0.0);
  }
}

TEST_CASE("gradient-space projection reproduces members and fits (y^2, 0)") {
  Mesh mesh = Mesh::from_vertices({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  WgSpace space(Family::Full, 0);
  LocalWeakGradient lwg = build_local_weak_gradient(mesh, 0, space);

  SUBCASE("exact reproduction of a field inside the space") {
    VectorField q = [](double x, double y) { return Vec2{1.0 - 2.0 * x + y, 0.5 * x}; };
    Eigen::VectorXd coeff = project_rh(q, mesh, 0, lwg, space.volume_exactness());
    Eigen::Matrix2Xd vals(2, lwg.basis.dim());
    for (Vec2 p : {Vec2{0.2, 0.1}, Vec2{0.5, 0.4}, Vec2{0.1, 0.7}}) {
      lwg.basis.values(p, vals);
      Eigen::Vector2d got = vals * coeff;
      Vec2 want = q(p.x, p.y);
      CHECK(std::abs(got(0) - want.x) < 1e-12);
      CHECK(std::abs(got(1) - want.y) < 1e-12);
    }
  }

  SUBCASE("componentwise linear least-squares fit of (y^2, 0)") {
    VectorField q = [](double, double y) { return Vec2{y * y, 0.0}; };
    Eigen::VectorXd coeff = project_rh(q, mesh, 0, lwg, 16);
    // dense normal-equations oracle in the monomial basis {1, x, y} per
    // component
    const QuadratureRule& rule = triangle_rule(16);
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (int i = 0; i < rule.size(); ++i) {
      Eigen::Vector3d mono(1.0, rule.x[i], rule.y[i]);
      m += rule.w[i] * mono * mono.transpose();
      rhs += rule.w[i] * rule.y[i] * rule.y[i] * mono;
    }
    Eigen::Vector3d fit = m.ldlt().solve(rhs);
    Eigen::Matrix2Xd vals(2, lwg.basis.dim());
    for (Vec2 p : {Vec2{0.25, 0.25}, Vec2{0.6, 0.2}, Vec2{0.15, 0.55}}) {
      lwg.basis.values(p, vals);
      Eigen::Vector2d got = vals * coeff;
      double want = fit(0) + fit(1) * p.x + fit(2) * p.y;
      CHECK(std::abs(got(0) - want) < 1e-10);
      CHECK(std::abs(got(1)) < 1e-10);
    }
  }

  SUBCASE("zero field") {
    Eigen::VectorXd coeff =
        project_rh([](double, double) { return Vec2{0, 0}; }, mesh, 0, lwg, 5);
    CHECK(coeff.norm() < 1e-15);
  }
}

TEST_CASE("elementwise projection of a constant is the constant weak function") {
  Mesh mesh = Mesh::unit_square(2);
  WgSpace space(Family::Full, 1);
  WeakFunction qh = project_weak([](double, double) { return 1.0; }, mesh, space);
  Eigen::VectorXd cdofs = constant_weak_dofs(space);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    Eigen::VectorXd local = gather_local_dofs(qh, mesh, t);
    CHECK((local - cdofs).cwiseAbs().maxCoeff() < 1e-13);
  }
}
