#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "dicke/classical/critical_points.hpp"
#include "dicke/error.hpp"

namespace dicke::observables {

enum class QuantumWell { left, right, mixed, above_c2 };

inline std::string to_string(QuantumWell w) {
  switch (w) {
    case QuantumWell::left: return "left";
    case QuantumWell::right: return "right";
    case QuantumWell::mixed: return "mixed";
    case QuantumWell::above_c2: return "above_c2";
  }
  return "unknown";
}

struct WellConstants {
  double q_c = 0.0;     // q of the saddle between the wells
  double eps_c1 = 0.0;  // bottom of the upper well
  double eps_c2 = 0.0;  // saddle energy where the wells merge
  double tau = 0.98;    // |<C>| threshold for a well label
};

/// Well constants from the stationary points: eps_c1 is the higher minimum,
/// (q_c, eps_c2) the lowest-energy saddle.
[[nodiscard]] inline WellConstants well_constants(const ModelParams& params, double tau = 0.98) {
  if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("invalid parameter 'tau': must lie in (0, 1)");
  const auto pts = classical::find_critical_points(params);
  std::vector<classical::CriticalPoint> minima, saddles;
  for (const auto& p : pts) {
    if (p.kind == classical::CriticalKind::minimum) minima.push_back(p);
    if (p.kind == classical::CriticalKind::saddle) saddles.push_back(p);
  }
  if (minima.size() < 2 || saddles.empty()) {
    std::ostringstream os;
    os << "no two-well structure at lambda=" << params.lambda << ", alpha=" << params.alpha << " (" << minima.size()
       << " minima, " << saddles.size() << " saddles)";
    throw DomainError(os.str());
  }
  WellConstants wc;
  wc.eps_c1 = minima[1].eps.eps;
  wc.q_c = saddles.front().x.q;
  wc.eps_c2 = saddles.front().eps.eps;
  wc.tau = tau;
  return wc;
}

[[nodiscard]] inline QuantumWell classify_wells(double c_nn, double eps_n, const WellConstants& wc) {
  if (eps_n > wc.eps_c2) return QuantumWell::above_c2;
  if (c_nn <= -wc.tau) return QuantumWell::left;
  if (c_nn >= wc.tau) return QuantumWell::right;
  return QuantumWell::mixed;
}

}  // namespace dicke::observables
