#pragma once

#include <cmath>
#include <sstream>

#include "dicke/error.hpp"

namespace dicke {

/// Physical constants of the deformed Dicke model (hbar = 1).
///
/// Only the maximally symmetric spin sector j = N/2 is represented, so the
/// atom number N is always derived from j.
struct ModelParams {
  double omega = 1.0;   // boson frequency
  double omega0 = 1.0;  // atomic level splitting
  double lambda = 1.5;  // atom-field coupling
  double alpha = 0.25;  // deformation strength, any real value
  double j = 15.0;      // collective spin, integer or half-integer

  [[nodiscard]] double atom_number() const { return 2.0 * j; }
  [[nodiscard]] int two_j() const { return static_cast<int>(std::lround(2.0 * j)); }

  /// Throws ConfigError naming the first violated constraint.
  void validate() const {
    auto fail = [](const char* key, const char* what, double v) {
      std::ostringstream os;
      os << "invalid parameter '" << key << "' = " << v << ": " << what;
      throw ConfigError(os.str());
    };
    if (!(omega > 0.0) || !std::isfinite(omega)) fail("omega", "must be > 0", omega);
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) fail("omega0", "must be > 0", omega0);
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail("lambda", "must be >= 0", lambda);
    if (!std::isfinite(alpha)) fail("alpha", "must be finite", alpha);
    if (!(j >= 0.5) || std::abs(2.0 * j - std::round(2.0 * j)) > 1e-12) {
      fail("j", "must be a positive multiple of 1/2", j);
    }
  }
};

/// Dimensionless energy eps = E / (omega0 j).
struct ReducedEnergy {
  double eps = 0.0;

  friend bool operator==(ReducedEnergy, ReducedEnergy) = default;
  friend auto operator<=>(ReducedEnergy, ReducedEnergy) = default;
};

[[nodiscard]] inline ReducedEnergy reduced_energy(double energy, const ModelParams& params) {
  return {energy / (params.omega0 * params.j)};
}

[[nodiscard]] inline double absolute_energy(ReducedEnergy e, const ModelParams& params) {
  return e.eps * params.omega0 * params.j;
}

/// lambda_c of the undeformed model, sqrt(omega omega0)/2.
[[nodiscard]] inline double undeformed_critical_coupling(const ModelParams& params) {
  return 0.5 * std::sqrt(params.omega * params.omega0);
}

}  // namespace dicke
