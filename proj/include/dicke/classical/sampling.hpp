#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>

#include "dicke/classical/phase_space.hpp"
#include "dicke/util/rng.hpp"

namespace dicke::classical {

enum class WellSide { any, left, right };

struct SamplingOptions {
  int max_attempts = 10'000;
  WellSide side = WellSide::any;  // restrict the root to q < q_c or q > q_c
  double q_c = 0.0;
};

namespace detail {

struct ShellSlice {
  double a;   // coefficient of q^2 / 2
  double b;   // coefficient of q
  double c0;  // constant term minus eps
  [[nodiscard]] double discriminant() const { return b * b - 2.0 * a * c0; }
};

/// H(q, 0, Q, P) - eps written as a quadratic in q.
inline ShellSlice shell_slice(double Q, double P, double eps, const ModelParams& m) {
  const auto k = coefficients(m);
  const double r = Q * Q + P * P;
  const double s = std::sqrt(std::max(0.0, 1.0 - 0.25 * r));
  return {k.a, k.b * Q * s + k.c, 0.5 * r - 1.0 - eps};
}

inline bool side_ok(double q, const SamplingOptions& opt) {
  switch (opt.side) {
    case WellSide::any: return true;
    case WellSide::left: return q < opt.q_c;
    case WellSide::right: return q > opt.q_c;
  }
  return true;
}

/// Polishes q so that H(q, 0, Q, P) matches eps to roundoff.
inline double polish_q(double q, double Q, double P, double eps, const ModelParams& m) {
  for (int it = 0; it < 3; ++it) {
    const PhaseState x{q, 0.0, Q, P};
    const double de = hamiltonian(x, m).eps - eps;
    const auto k = coefficients(m);
    const double dq = k.a * q + k.b * Q * std::sqrt(std::max(0.0, 1.0 - 0.25 * (Q * Q + P * P))) + k.c;
    if (de == 0.0 || dq == 0.0) break;
    q -= de / dq;
  }
  return q;
}

}  // namespace detail

/// Draws a point on the energy shell H = eps: (Q, P) uniform in the Bloch
/// disk, p = 0, and q a real root of the quadratic the shell condition gives
/// on that slice (chosen uniformly between the two roots).
///
/// If no random slice intersects the shell (eps at or just above the ground
/// energy) the slice with the largest discriminant along P = 0 is used,
/// which recovers the ground-state minimum itself.
inline PhaseState sample_initial_condition(ReducedEnergy eps, const ModelParams& params, std::uint64_t rng_seed,
                                           const SamplingOptions& opt = {}) {
  std::mt19937_64 rng(splitmix64(rng_seed));
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::bernoulli_distribution coin(0.5);

  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    const double Q = coord(rng);
    const double P = coord(rng);
    if (Q * Q + P * P >= 4.0 - 1e-9) continue;
    const auto sl = detail::shell_slice(Q, P, eps.eps, params);
    const double disc = sl.discriminant();
    if (disc < 0.0) continue;
    // Numerically stable pair of roots of (a/2) q^2 + b q + c0.
    const double sq = std::sqrt(disc);
    const double q1 = -(sl.b + std::copysign(sq, sl.b)) / sl.a;
    const double q2 = q1 != 0.0 ? (2.0 * sl.c0 / sl.a) / q1 : -sl.b / sl.a;
    double q = coin(rng) ? q1 : q2;
    if (!detail::side_ok(q, opt)) q = (q == q1) ? q2 : q1;
    if (!detail::side_ok(q, opt)) continue;
    q = detail::polish_q(q, Q, P, eps.eps, params);
    return {q, 0.0, Q, P};
  }

  // Fallback: best slice along P = 0 by golden-section search on the discriminant.
  auto disc_at = [&](double Q) { return detail::shell_slice(Q, 0.0, eps.eps, params).discriminant(); };
  double best_Q = 0.0, best = -1e300;
  for (int i = 1; i < 400; ++i) {
    const double Q = -2.0 + 4.0 * i / 400.0;
    const double d = disc_at(Q);
    if (d > best) best = d, best_Q = Q;
  }
  double lo = best_Q - 0.01, hi = best_Q + 0.01;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
    if (disc_at(m1) > disc_at(m2)) hi = m2; else lo = m1;
  }
  best_Q = 0.5 * (lo + hi);
  const auto sl = detail::shell_slice(best_Q, 0.0, eps.eps, params);
  if (sl.discriminant() > -2.0 * sl.a * 1e-12) {
    const double q = -sl.b / sl.a;
    if (detail::side_ok(q, opt)) return {q, 0.0, best_Q, 0.0};
  }
  std::ostringstream os;
  os << "no initial condition found on the energy shell eps=" << eps.eps << " after " << opt.max_attempts
     << " attempts (energy below the reachable range)";
  throw NumericalError(os.str());
}

}  // namespace dicke::classical
