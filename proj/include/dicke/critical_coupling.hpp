#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dicke/classical/critical_points.hpp"
#include "dicke/model.hpp"

namespace dicke {

struct CouplingSearch {
  double tol = 1e-6;
  double upper_start = 1.0;
  double upper_limit = 1e3;
  classical::SeedGrid grid{};
};

/// Smallest lambda at which the classical energy surface has a second
/// minimum, located by bisection on the minima returned by
/// find_critical_points. Works for any alpha. Stationary points that appear
/// near the Bloch rim at small lambda are saddles and do not count.
inline double critical_coupling_numeric(ModelParams params, const CouplingSearch& search = {}) {
  auto multiple = [&](double lambda) {
    params.lambda = lambda;
    const auto pts = classical::find_critical_points(params, search.grid);
    return std::count_if(pts.begin(), pts.end(), [](const classical::CriticalPoint& c) {
             return c.kind == classical::CriticalKind::minimum;
           }) > 1;
  };
  double lo = 0.0, hi = search.upper_start;
  while (!multiple(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > search.upper_limit) {
      std::ostringstream os;
      os << "critical coupling search did not bracket a bifurcation; last interval [" << lo << ", " << hi << "]";
      throw NumericalError(os.str());
    }
  }
  if (multiple(lo)) {
    std::ostringstream os;
    os << "critical coupling search: two minima already at lambda=" << lo
       << "; bracketing interval [" << lo << ", " << hi << "]";
    throw NumericalError(os.str());
  }
  while (hi - lo > search.tol) {
    const double mid = 0.5 * (lo + hi);
    (multiple(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

/// lambda_c: closed form for alpha = 0 (any omega, omega0) and for
/// alpha = 1/4 at omega = omega0 = 1; bisection otherwise.
inline double critical_coupling(const ModelParams& params, const CouplingSearch& search = {}) {
  if (params.alpha == 0.0) return 0.5 * std::sqrt(params.omega * params.omega0);
  if (std::abs(params.alpha) == 0.25 && params.omega == 1.0 && params.omega0 == 1.0) {
    return 0.5 * std::sqrt(13.0 / 16.0 + 5.0 * std::sqrt(17.0) / 16.0);
  }
  return critical_coupling_numeric(params, search);
}

}  // namespace dicke
