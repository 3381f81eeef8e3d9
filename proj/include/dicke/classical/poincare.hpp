#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "dicke/classical/flow.hpp"

namespace dicke::classical {

enum class CrossingFilter { both, upward, downward };

/// Intersection of a trajectory with the hyperplane P = 0.
struct SectionPoint {
  double t = 0.0;
  double q = 0.0;
  double p = 0.0;
  double Q = 0.0;
  int direction = 0;  // sign of dP/dt at the crossing
  std::int64_t traj_id = 0;

  [[nodiscard]] PhaseState state() const { return {q, p, Q, 0.0}; }
};

inline constexpr double kSectionTolerance = 1e-10;

namespace detail {

/// Bisection on the step interpolant for P(t) = 0 inside [dense.t0, dense.t1].
inline double locate_crossing(const DenseStep<4>& dense, double p_lo) {
  double lo = dense.t0, hi = dense.t1();
  double mid = hi;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double pm = dense.component(3, mid);
    if (std::abs(pm) < kSectionTolerance || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(mid)) {
      break;
    }
    if ((pm < 0.0) == (p_lo < 0.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

}  // namespace detail

/// Collects P = 0 crossings of the trajectory started at x0 on [0, t_max].
/// Both crossing directions are recorded unless `filter` says otherwise.
inline std::vector<SectionPoint> poincare_section(const PhaseState& x0, double t_max, const ModelParams& params,
                                                  CrossingFilter filter = CrossingFilter::both,
                                                  std::int64_t traj_id = 0, FlowOptions opts = {}) {
  opts.store_samples = false;
  std::vector<SectionPoint> points;
  auto on_step = [&](const DenseStep<4>& dense, const PhaseState&) {
    const double p_start = dense.component(3, dense.t0);
    const double p_end = dense.component(3, dense.t1());
    const bool up = p_start < 0.0 && p_end >= 0.0;
    const bool down = p_start > 0.0 && p_end <= 0.0;
    if (!up && !down) return;
    const int dir = up ? 1 : -1;
    if ((filter == CrossingFilter::upward && dir < 0) || (filter == CrossingFilter::downward && dir > 0)) return;
    const double tc = p_end == 0.0 ? dense.t1() : detail::locate_crossing(dense, p_start);
    const auto yc = dense.at(tc);
    points.push_back({tc, yc[0], yc[1], yc[2], dir, traj_id});
  };
  integrate(x0, t_max, params, opts, on_step);
  return points;
}

}  // namespace dicke::classical
