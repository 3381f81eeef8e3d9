#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "dicke/error.hpp"
#include "dicke/quantum/spectrum.hpp"

namespace dicke::quantum {

struct TruncationReport {
  int n_max = 0;
  int n_max_reference = 0;  // ceil(1.25 n_max)
  double eps_max = 0.0;
  Eigen::Index levels = 0;  // states with eps <= eps_max at n_max
  double max_delta = 0.0;   // max |delta eps_n| over those states
  bool converged = false;
};

inline constexpr double kTruncationTolerance = 1e-6;

/// Compares the reduced spectrum up to eps_max at n_max and at ceil(1.25 n_max).
/// Truncating the Fock space can only raise eigenvalues, so the level count
/// at the larger cutoff is at least the count at n_max.
[[nodiscard]] inline TruncationReport check_truncation(const ModelParams& params, int n_max, double eps_max,
                                                       AlphaConvention conv = AlphaConvention::semiclassical) {
  if (n_max < 10) {
    throw ConfigError("invalid parameter 'n_max' = " + std::to_string(n_max) + ": convergence check needs n_max >= 10");
  }
  params.validate();
  TruncationReport rep;
  rep.n_max = n_max;
  rep.n_max_reference = static_cast<int>(std::ceil(1.25 * n_max));
  rep.eps_max = eps_max;
  const double scale = params.omega0 * params.j;

  const QuantumBasis small(params.j, n_max);
  const Eigen::VectorXd e_small = band_eigenvalues(build_hamiltonian_band(params, small, conv), eps_max * scale);
  rep.levels = e_small.size();
  if (rep.levels == 0) {
    rep.converged = true;
    return rep;
  }
  const QuantumBasis large(params.j, rep.n_max_reference);
  const Eigen::VectorXd e_large =
      band_eigenvalues(build_hamiltonian_band(params, large, conv), std::nullopt, static_cast<int>(rep.levels));
  rep.max_delta = ((e_small - e_large) / scale).cwiseAbs().maxCoeff();
  rep.converged = rep.max_delta < kTruncationTolerance;
  return rep;
}

}  // namespace dicke::quantum
