#pragma once

#include <cmath>

#include "dicke/model.hpp"

namespace dicke::observables {

/// Normalization of the field term in the band energies. `verbatim` is
/// (2 / sqrt(omega0)) alpha q; `scaled` is alpha sqrt(2 omega0 j) q, which in
/// reduced units reproduces the sqrt(2/omega0) alpha q term of the classical
/// energy surface.
enum class BandAlphaTerm { verbatim, scaled };

/// Born-Oppenheimer band energy for spin projection m' at boson coordinates
/// (q, p) with q = sqrt(j) q_classical. Returns an absolute energy.
[[nodiscard]] inline double band_energy(double m_prime, double q, double p, const ModelParams& params,
                                        BandAlphaTerm term = BandAlphaTerm::verbatim) {
  if (std::abs(m_prime) > params.j + 1e-12 || std::abs(std::round(m_prime + params.j) - (m_prime + params.j)) > 1e-12) {
    throw ConfigError("invalid parameter 'm_prime': must be one of -j, ..., j");
  }
  const double lc = undeformed_critical_coupling(params);
  const double ratio = params.lambda * params.lambda / (lc * lc);
  const double split = params.omega0 * std::sqrt(1.0 + ratio * params.omega * q * q / (params.omega0 * params.j));
  const double field = term == BandAlphaTerm::verbatim ? 2.0 / std::sqrt(params.omega0) * params.alpha * q
                                                       : params.alpha * std::sqrt(2.0 * params.omega0 * params.j) * q;
  return 0.5 * params.omega * (p * p + q * q) + split * m_prime + field;
}

/// Minimum of band_energy over q at p = 0 (golden section on a bracket that
/// contains every stationary point of the band).
[[nodiscard]] inline double band_minimum(double m_prime, const ModelParams& params,
                                         BandAlphaTerm term = BandAlphaTerm::verbatim, double* q_at = nullptr) {
  auto e = [&](double q) { return band_energy(m_prime, q, 0.0, params, term); };
  // Coarse scan, then refine around the best sample.
  const double span = 4.0 * std::sqrt(params.j) * (1.0 + 2.0 * params.lambda / params.omega0 +
                                                   std::abs(params.alpha) * std::sqrt(params.omega0)) +
                      10.0;
  const int samples = 4000;
  double best_q = -span, best = e(-span);
  for (int i = 1; i <= samples; ++i) {
    const double q = -span + 2.0 * span * i / samples;
    const double v = e(q);
    if (v < best) best = v, best_q = q;
  }
  double lo = best_q - 2.0 * span / samples, hi = best_q + 2.0 * span / samples;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(best_q)); ++it) {
    const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
    if (e(m1) < e(m2)) hi = m2; else lo = m1;
  }
  const double q = 0.5 * (lo + hi);
  if (q_at) *q_at = q;
  return e(q);
}

}  // namespace dicke::observables
