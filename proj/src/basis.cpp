#include "wg/basis.hpp"

#include "wg/errors.hpp"
#include "wg/quadrature.hpp"

#include <Eigen/Cholesky>

#include <array>
#include <cmath>
#include <mutex>
#include <optional>

namespace wg {

namespace {

double int_pow(double b, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// Degrees are bounded in practice by the supported quadrature exactness.
constexpr int kMaxCachedDegree = 24;

template <class Basis>
const Basis& cached_basis(int degree) {
  if (degree > kMaxCachedDegree)
    throw std::invalid_argument("basis degree " + std::to_string(degree) + " exceeds " +
                                std::to_string(kMaxCachedDegree));
  static std::array<std::optional<Basis>, kMaxCachedDegree + 1> cache;
  static std::array<std::once_flag, kMaxCachedDegree + 1> flags;
  std::call_once(flags[degree], [&] { cache[degree].emplace(Basis(degree)); });
  return *cache[degree];
}

} // namespace

ScalarBasis::ScalarBasis(int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("scalar basis degree must be >= 0");
  for (int d = 0; d <= degree; ++d)
    for (int px = d; px >= 0; --px) {
      px_.push_back(px);
      py_.push_back(d - px);
    }
  const int n = dim();

  // Gram matrix of the monomials under the exact reference-triangle integrals;
  // the inverse transpose Cholesky factor orthonormalizes.
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      gram(i, k) = reference_monomial_integral(px_[i] + px_[k], py_[i] + py_[k]);
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::Degenerate, "scalar basis Gram factorization failed");
  coeffs_ = llt.matrixL().transpose().solve(Eigen::MatrixXd::Identity(n, n));
}

double ScalarBasis::value(int i, double x, double y) const {
  double v = 0.0;
  for (int k = 0; k < dim(); ++k)
    v += coeffs_(k, i) * int_pow(x, px_[k]) * int_pow(y, py_[k]);
  return v;
}

void ScalarBasis::values(double x, double y, Eigen::Ref<Eigen::VectorXd> out) const {
  const int n = dim();
  Eigen::VectorXd mono(n);
  for (int k = 0; k < n; ++k) mono(k) = int_pow(x, px_[k]) * int_pow(y, py_[k]);
  out = coeffs_.transpose() * mono;
}

const ScalarBasis& ScalarBasis::cached(int degree) { return cached_basis<ScalarBasis>(degree); }

EdgeBasis::EdgeBasis(int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("edge basis degree must be >= 0");
}

double EdgeBasis::value(int k, double t) const {
  // sqrt(2k+1) P_k(2t-1), orthonormal on [0,1]
  double s = 2.0 * t - 1.0;
  double p0 = 1.0, p1 = s;
  double p = (k == 0) ? p0 : p1;
  for (int m = 2; m <= k; ++m) {
    double p2 = ((2.0 * m - 1.0) * s * p1 - (m - 1.0) * p0) / m;
    p0 = p1;
    p1 = p2;
    p = p2;
  }
  return std::sqrt(2.0 * k + 1.0) * p;
}

void EdgeBasis::values(double t, Eigen::Ref<Eigen::VectorXd> out) const {
  double s = 2.0 * t - 1.0;
  double p0 = 1.0, p1 = s;
  for (int k = 0; k <= degree_; ++k) {
    double p;
    if (k == 0)
      p = p0;
    else if (k == 1)
      p = p1;
    else {
      p = ((2.0 * k - 1.0) * s * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p;
    }
    out(k) = std::sqrt(2.0 * k + 1.0) * p;
  }
}

const EdgeBasis& EdgeBasis::cached(int degree) { return cached_basis<EdgeBasis>(degree); }

int vector_basis_dim(VectorVariant variant, int j) {
  return variant == VectorVariant::Full ? (j + 2) * (j + 3) : (j + 1) * (j + 3);
}

VectorBasis::VectorBasis(VectorVariant variant, int j, Vec2 center, double scale)
    : variant_(variant), j_(j), center_(center), scale_(scale) {
  if (j < 0) throw std::invalid_argument("vector basis degree must be >= 0");
  if (!(scale > 0.0)) throw std::invalid_argument("vector basis scale must be positive");
  const int scalar_deg = (variant == VectorVariant::Full) ? j + 1 : j;
  for (int comp = 0; comp < 2; ++comp)
    for (int d = 0; d <= scalar_deg; ++d)
      for (int px = d; px >= 0; --px) members_.push_back({comp, px, d - px});
  if (variant == VectorVariant::RaviartThomas)
    for (int px = j; px >= 0; --px) members_.push_back({2, px, j - px});
}

Vec2 VectorBasis::raw_value(int m, Vec2 p) const {
  const Member& mem = members_[m];
  double xi = (p.x - center_.x) / scale_;
  double eta = (p.y - center_.y) / scale_;
  double mono = int_pow(xi, mem.px) * int_pow(eta, mem.py);
  switch (mem.comp) {
    case 0: return {mono, 0.0};
    case 1: return {0.0, mono};
    default: return {xi * mono, eta * mono};
  }
}

double VectorBasis::raw_divergence(int m, Vec2 p) const {
  const Member& mem = members_[m];
  double xi = (p.x - center_.x) / scale_;
  double eta = (p.y - center_.y) / scale_;
  switch (mem.comp) {
    case 0:
      return mem.px == 0 ? 0.0 : mem.px * int_pow(xi, mem.px - 1) * int_pow(eta, mem.py) / scale_;
    case 1:
      return mem.py == 0 ? 0.0 : mem.py * int_pow(xi, mem.px) * int_pow(eta, mem.py - 1) / scale_;
    default:
      // div(xi * xi^a eta^b) = (a + b + 2) xi^a eta^b, scaled by the frame
      return (mem.px + mem.py + 2) * int_pow(xi, mem.px) * int_pow(eta, mem.py) / scale_;
  }
}

void VectorBasis::raw_values(Vec2 p, Eigen::Ref<Eigen::Matrix2Xd> out) const {
  for (int m = 0; m < dim(); ++m) {
    Vec2 v = raw_value(m, p);
    out(0, m) = v.x;
    out(1, m) = v.y;
  }
}

void VectorBasis::raw_divergences(Vec2 p, Eigen::Ref<Eigen::VectorXd> out) const {
  for (int m = 0; m < dim(); ++m) out(m) = raw_divergence(m, p);
}

void VectorBasis::orthonormalize(const Eigen::MatrixXd& gram, double cond_limit) {
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::Degenerate, "gradient-space Gram matrix is not positive definite");
  Eigen::VectorXd d = llt.matrixL().toDenseMatrix().diagonal();
  double ratio = d.maxCoeff() / d.minCoeff();
  gram_condition_ = ratio * ratio;
  if (gram_condition_ > cond_limit)
    throw Error(ErrorKind::Degenerate,
                "degenerate element: gradient-space condition estimate " +
                    std::to_string(gram_condition_) + " exceeds " + std::to_string(cond_limit));
  const int n = dim();
  ortho_ = llt.matrixL().transpose().solve(Eigen::MatrixXd::Identity(n, n));
}

Vec2 VectorBasis::value(int m, Vec2 p) const {
  if (!orthonormalized()) return raw_value(m, p);
  Vec2 v{0.0, 0.0};
  for (int k = 0; k < dim(); ++k) {
    double c = ortho_(k, m);
    if (c == 0.0) continue;
    Vec2 r = raw_value(k, p);
    v.x += c * r.x;
    v.y += c * r.y;
  }
  return v;
}

double VectorBasis::divergence(int m, Vec2 p) const {
  if (!orthonormalized()) return raw_divergence(m, p);
  double v = 0.0;
  for (int k = 0; k < dim(); ++k) v += ortho_(k, m) * raw_divergence(k, p);
  return v;
}

void VectorBasis::values(Vec2 p, Eigen::Ref<Eigen::Matrix2Xd> out) const {
  Eigen::Matrix2Xd raw(2, dim());
  raw_values(p, raw);
  if (orthonormalized())
    out = raw * ortho_;
  else
    out = raw;
}

void VectorBasis::divergences(Vec2 p, Eigen::Ref<Eigen::VectorXd> out) const {
  Eigen::VectorXd raw(dim());
  raw_divergences(p, raw);
  if (orthonormalized())
    out = ortho_.transpose() * raw;
  else
    out = raw;
}

} // namespace wg
