#pragma once

#include <cmath>
#include <random>

#include "dicke/classical/phase_space.hpp"

namespace dicke::test {

inline ModelParams deformed() {
  ModelParams p;
  p.omega = p.omega0 = 1.0;
  p.lambda = 1.5;
  p.alpha = 0.25;
  return p;
}

inline ModelParams undeformed() {
  ModelParams p = deformed();
  p.alpha = 0.0;
  return p;
}

/// Uniform q, p in [-box, box] and (Q, P) uniform in the disk of radius r_max.
inline classical::PhaseState random_state(std::mt19937_64& rng, double box = 4.0, double r_max = 1.95) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), unit(0.0, 1.0);
  const double r = r_max * std::sqrt(unit(rng)), phi = 2.0 * M_PI * unit(rng);
  return {box * u(rng), box * u(rng), r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace dicke::test
