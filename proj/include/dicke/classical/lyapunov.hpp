#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

#include "dicke/classical/flow.hpp"
#include "dicke/util/rng.hpp"

namespace dicke::classical {

struct LyapunovOptions {
  double tol = 1e-10;
  bool project_energy = true;
  std::uint64_t seed = 0;  // initial tangent direction
};

struct LyapunovResult {
  double exponent = 0.0;  // time-averaged log growth rate of the tangent vector
  double t_max = 0.0;
  ReducedEnergy eps0;
  std::size_t steps = 0;
};

/// Largest Lyapunov exponent from the tangent flow d(dx)/dt = J Hess H(x) dx,
/// renormalizing the tangent vector after every accepted step.
inline LyapunovResult lyapunov_max(const PhaseState& x0, double t_max, const ModelParams& params,
                                   const LyapunovOptions& opt = {}) {
  validate_tolerance(opt.tol);
  using S8 = StateN<8>;
  const double eps0 = hamiltonian(x0, params).eps;

  S8 y{};
  const Vec4 xa = x0.to_array();
  for (int i = 0; i < 4; ++i) y[i] = xa[i];
  {
    auto rng = stream_rng(opt.seed, 0);
    std::normal_distribution<double> gauss;
    double n2 = 0.0;
    for (int i = 4; i < 8; ++i) {
      y[i] = gauss(rng);
      n2 += y[i] * y[i];
    }
    for (int i = 4; i < 8; ++i) y[i] /= std::sqrt(n2);
  }

  auto rhs = [&](const S8& s, S8& ds) {
    Vec4 xs{s[0], s[1], s[2], s[3]};
    Vec4 dx{};
    if (!HamiltonFlow{&params}(xs, dx)) return false;
    const Mat4 h = hessian(PhaseState::from_array(xs), params);
    Vec4 hd{};
    for (int r = 0; r < 4; ++r) {
      hd[r] = 0.0;
      for (int c = 0; c < 4; ++c) hd[r] += h[r][c] * s[4 + c];
    }
    ds = {dx[0], dx[1], dx[2], dx[3], hd[1], -hd[0], hd[3], -hd[2]};
    return true;
  };

  double log_sum = 0.0;
  auto post = [&](S8& s) {
    if (opt.project_energy) {
      Vec4 xs{s[0], s[1], s[2], s[3]};
      project_to_shell(xs, eps0, params, 100.0 * opt.tol);
      for (int i = 0; i < 4; ++i) s[i] = xs[i];
    }
    double n2 = 0.0;
    for (int i = 4; i < 8; ++i) n2 += s[i] * s[i];
    const double n = std::sqrt(n2);
    log_sum += std::log(n);
    for (int i = 4; i < 8; ++i) s[i] /= n;
    return true;
  };

  Dopri5Options dopt;
  dopt.rtol = opt.tol;
  dopt.atol = opt.tol;
  Dopri5Stats stats;
  try {
    stats = integrate_dopri5<8>(rhs, y, 0.0, t_max, dopt, post, [](const DenseStep<8>&, const S8&) {});
  } catch (const StepUnderflow<8>& e) {
    const auto& s = e.last_state();
    throw IntegrationError(e.what(), e.time(), {s[0], s[1], s[2], s[3]});
  }
  return {std::max(0.0, log_sum / t_max), t_max, {eps0}, stats.accepted};
}

}  // namespace dicke::classical
