#pragma once

#include <vector>

namespace wg {

// Quadrature on the reference triangle (0,0),(1,0),(0,1) and on the unit
// segment [0,1]. Rules are constructed once per exactness degree and cached.
struct QuadratureRule {
  std::vector<double> x; // triangle: first reference coordinate; edge: parameter t
  std::vector<double> y; // triangle only, empty for edge rules
  std::vector<double> w;
  int exactness = 0;

  int size() const { return static_cast<int>(w.size()); }
};

inline constexpr int kMaxTriangleExactness = 24;
inline constexpr int kMaxEdgeExactness = 47;

// Integrates every bivariate monomial of total degree <= exactness over the
// reference triangle. exactness <= 1 yields the one-point centroid rule.
const QuadratureRule& triangle_rule(int exactness);

// Gauss rule on [0,1]; k points are exact through degree 2k-1.
const QuadratureRule& edge_rule(int exactness);

// Exact value of the reference-triangle integral of x^p y^q.
double reference_monomial_integral(int p, int q);

} // namespace wg
