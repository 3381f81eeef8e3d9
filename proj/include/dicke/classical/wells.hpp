#pragma once

#include <string>

#include "dicke/classical/flow.hpp"

namespace dicke::classical {

enum class WellLabel { left, right, crossing };

inline std::string to_string(WellLabel w) {
  switch (w) {
    case WellLabel::left: return "left";
    case WellLabel::right: return "right";
    case WellLabel::crossing: return "crossing";
  }
  return "unknown";
}

/// left if q(t) < q_c for every sample, right if q(t) > q_c for every sample.
inline WellLabel classical_well_label(const Trajectory& traj, double q_c) {
  bool below = false, above = false;
  for (const auto& s : traj.samples) {
    if (s.x.q < q_c) below = true;
    else if (s.x.q > q_c) above = true;
    else below = above = true;
  }
  if (below && !above) return WellLabel::left;
  if (above && !below) return WellLabel::right;
  return WellLabel::crossing;
}

}  // namespace dicke::classical
