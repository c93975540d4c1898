#include "wg/problem.hpp"

#include "wg/errors.hpp"

#include <cmath>
#include <sstream>

namespace wg {

double ProblemSpec::min_a_eigenvalue(double x, double y) const {
  double p = a11(x, y), q = a12(x, y), r = a22(x, y);
  double half_diff = 0.5 * (p - r);
  return 0.5 * (p + r) - std::sqrt(half_diff * half_diff + q * q);
}

void ProblemSpec::check_ellipticity_at(double x, double y) const {
  double lmin = min_a_eigenvalue(x, y);
  if (!(lmin >= alpha)) {
    std::ostringstream os;
    os << "diffusion matrix a loses ellipticity at (" << x << ", " << y << "): minimum eigenvalue "
       << lmin << " < alpha = " << alpha;
    throw Error(ErrorKind::Ellipticity, os.str());
  }
}

ProblemSpec ProblemSpec::poisson(ScalarField f, ScalarField g) {
  ProblemSpec p;
  p.a11 = [](double, double) { return 1.0; };
  p.a12 = [](double, double) { return 0.0; };
  p.a22 = [](double, double) { return 1.0; };
  p.b1 = [](double, double) { return 0.0; };
  p.b2 = [](double, double) { return 0.0; };
  p.c = [](double, double) { return 0.0; };
  p.f = std::move(f);
  p.g = std::move(g);
  return p;
}

} // namespace wg
