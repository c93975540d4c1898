#pragma once

#include "wg/mesh.hpp"
#include "wg/problem.hpp"
#include "wg/space.hpp"
#include "wg/weak_gradient.hpp"

#include <Eigen/Dense>

#include <vector>

namespace wg {

// Error norms of a solution against an exact field:
//   eH1      discrete H1 seminorm part  || grad_w(u_h - Q_h u) ||
//   eL2proj  || u_0 - Q_0 u ||           (the superconvergent quantity)
//   eL2      || u_0 - u ||               (against the exact field itself)
struct ErrorNorms {
  double h = 0.0;
  int dofs = 0;
  double eH1 = 0.0;
  double eL2proj = 0.0;
  double eL2 = 0.0;
};

ErrorNorms error_norms(const WeakFunction& u_h, const ScalarField& exact, const Mesh& mesh,
                       const WgSpace& space, const LocalGradientSet& grads);

// Coefficients (in the element's gradient-space basis) of the conservative
// numerical flux field R_h(-a grad_w u_h + b u_0) on element t.
Eigen::VectorXd numerical_flux_coeffs(const WeakFunction& u_h, const ProblemSpec& problem,
                                      const Mesh& mesh, int t, const WgSpace& space,
                                      const LocalWeakGradient& lwg);

// Normal trace of the numerical flux on local edge le of element t, evaluated
// at parameter tpar of the global edge direction, against the element's
// outward normal.
double numerical_flux_trace(const Eigen::VectorXd& flux_coeffs, const Mesh& mesh, int t, int le,
                            double tpar, const LocalWeakGradient& lwg);

// | sum_edges int_e q_h.n_out + int_T c u_0 - int_T f |, evaluated with the
// assembly quadrature so the identity of the discrete scheme is tested rather
// than drowned in integration error.
double conservation_residual(const WeakFunction& u_h, const ProblemSpec& problem, const Mesh& mesh,
                             int t, const WgSpace& space, const LocalWeakGradient& lwg);
// |T| * max|f| + 1, the reference magnitude for the residual above.
double conservation_scale(const ProblemSpec& problem, const Mesh& mesh, int t,
                          const WgSpace& space);

// Elementwise conservation residuals and interior-edge normal-flux jumps.
struct FluxReport {
  std::vector<double> element_residual;
  std::vector<double> element_scale;
  std::vector<int> interior_edge;   // global edge ids
  std::vector<double> edge_jump;    // L2 norm of the two-sided outward-trace sum
  std::vector<double> edge_scale;   // 1 + max one-sided trace norm
  double max_residual_ratio = 0.0;
  double mean_residual_ratio = 0.0;
  double max_jump_ratio = 0.0;
  double mean_jump_ratio = 0.0;
};

FluxReport flux_report(const WeakFunction& u_h, const ProblemSpec& problem, const Mesh& mesh,
                       const WgSpace& space, const LocalGradientSet& grads);

// Convergence-rate estimation from (h, error) pairs. Errors at or below
// exact_threshold are treated as exact reproduction and get no rate.
struct StepRate {
  double rate = 0.0;
  bool exact = false;
};
inline constexpr double kExactErrorThreshold = 1e-9;

std::vector<StepRate> step_rates(const std::vector<double>& h, const std::vector<double>& err,
                                 double exact_threshold = kExactErrorThreshold);
// Least-squares slope of log err against log h, over the non-exact levels;
// NaN when fewer than two usable levels remain.
double ls_slope(const std::vector<double>& h, const std::vector<double>& err,
                double exact_threshold = kExactErrorThreshold);

} // namespace wg
