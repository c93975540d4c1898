#pragma once

#include "wg/fields.hpp"

#include <Eigen/Dense>

#include <optional>

namespace wg {

// Coefficient data of the model problem
//   -div(a grad u) + div(b u) + c u = f  in the domain,  u = g on the boundary,
// with a symmetric by construction (entries a11, a12, a22). Eigenvalues of a
// must stay above alpha at every evaluation point used.
struct ProblemSpec {
  ScalarField a11, a12, a22;
  ScalarField b1, b2;
  ScalarField c;
  ScalarField f;
  ScalarField g;

  std::optional<ScalarField> exact_u;
  std::optional<ScalarField> exact_ux, exact_uy;

  bool has_convection = false; // b not structurally zero; breaks symmetry
  bool has_reaction = false;
  double alpha = 1e-10;

  Eigen::Matrix2d a(double x, double y) const {
    Eigen::Matrix2d m;
    m(0, 0) = a11(x, y);
    m(0, 1) = m(1, 0) = a12(x, y);
    m(1, 1) = a22(x, y);
    return m;
  }
  Vec2 b(double x, double y) const { return {b1(x, y), b2(x, y)}; }

  double min_a_eigenvalue(double x, double y) const;
  // Throws an ellipticity error naming the point when a loses positivity.
  void check_ellipticity_at(double x, double y) const;

  // Poisson problem with unit diffusion; convenient default for tests.
  static ProblemSpec poisson(ScalarField f, ScalarField g);
};

} // namespace wg
