#include "wg/quadrature.hpp"

#include "wg/errors.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <optional>
#include <string>

namespace wg {

double reference_monomial_integral(int p, int q) {
  // p! q! / (p+q+2)! evaluated as a running product to stay in range.
  double v = 1.0;
  for (int k = 1; k <= q; ++k) v *= static_cast<double>(k) / static_cast<double>(p + k);
  v /= static_cast<double>(p + q + 1);
  v /= static_cast<double>(p + q + 2);
  return v;
}

namespace {

// Gauss-Legendre nodes/weights on [0,1], symmetrized about 1/2.
void gauss_points(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(pi * (i + 0.75) / (n + 0.5)); // initial guess on (-1,1)
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence: P_k and derivative at t.
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = -p1 / dp;
      t += dt;
      if (std::abs(dt) < 1e-16) break;
    }
    double weight = 2.0 / ((1.0 - t * t) * dp * dp);
    // Map (-1,1) -> (0,1); node i is in the upper half, mirror to the lower.
    x[i] = 0.5 * (1.0 + t);
    w[i] = 0.5 * weight;
    x[n - 1 - i] = 0.5 * (1.0 - t);
    w[n - 1 - i] = 0.5 * weight;
  }
  if (n % 2 == 1) x[n / 2] = 0.5;
}

QuadratureRule make_edge_rule(int exactness) {
  QuadratureRule r;
  r.exactness = exactness;
  const int k = (exactness + 2) / 2; // 2k-1 >= exactness
  gauss_points(k, r.x, r.w);
  return r;
}

QuadratureRule make_triangle_rule(int exactness) {
  QuadratureRule r;
  r.exactness = exactness;
  if (exactness <= 1) {
    r.x = {1.0 / 3.0};
    r.y = {1.0 / 3.0};
    r.w = {0.5};
    return r;
  }
  // Collapsed product rule: (x,y) = (u, v*(1-u)), dx dy = (1-u) du dv.
  // The u-integrand picks up one extra degree from the Jacobian.
  const int k = (exactness + 3) / 2; // 2k-1 >= exactness+1
  std::vector<double> gx, gw;
  gauss_points(k, gx, gw);
  r.x.reserve(k * k);
  r.y.reserve(k * k);
  r.w.reserve(k * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      r.x.push_back(gx[i]);
      r.y.push_back(gx[j] * (1.0 - gx[i]));
      r.w.push_back(gw[i] * gw[j] * (1.0 - gx[i]));
    }
  }
  return r;
}

// Once-initialized slot per exactness degree; the post-warmup path is a
// single acquire load, so concurrent element loops never contend.
template <int MaxExactness, class Make>
const QuadratureRule& cached_rule(int exactness, Make make) {
  static std::array<std::optional<QuadratureRule>, MaxExactness + 1> cache;
  static std::array<std::once_flag, MaxExactness + 1> flags;
  std::call_once(flags[exactness], [&] { cache[exactness].emplace(make(exactness)); });
  return *cache[exactness];
}

} // namespace

const QuadratureRule& triangle_rule(int exactness) {
  if (exactness > kMaxTriangleExactness)
    throw Error(ErrorKind::Config, "triangle quadrature exactness " + std::to_string(exactness) +
                                       " unsupported (maximum " +
                                       std::to_string(kMaxTriangleExactness) + ")");
  if (exactness < 0) exactness = 0;
  return cached_rule<kMaxTriangleExactness>(exactness, make_triangle_rule);
}

const QuadratureRule& edge_rule(int exactness) {
  if (exactness > kMaxEdgeExactness)
    throw Error(ErrorKind::Config, "edge quadrature exactness " + std::to_string(exactness) +
                                       " unsupported (maximum " + std::to_string(kMaxEdgeExactness) +
                                       ")");
  if (exactness < 0) exactness = 0;
  return cached_rule<kMaxEdgeExactness>(exactness, make_edge_rule);
}

} // namespace wg
