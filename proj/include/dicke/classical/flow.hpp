#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "dicke/classical/dopri5.hpp"
#include "dicke/classical/phase_space.hpp"

namespace dicke::classical {

struct FlowOptions {
  double tol = 1e-10;
  /// Pull every accepted state back onto the initial energy shell with a
  /// Newton step along grad H. Removes the secular drift of the explicit
  /// scheme; the per-step correction is reported as `max_step_defect`.
  bool project_energy = true;
  double drift_bound_factor = 1e-8;  // bound = factor * max(1, |eps0|)
  bool store_samples = true;
  double max_step = 0.0;
};

struct TrajectorySample {
  double t = 0.0;
  PhaseState x;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  ReducedEnergy eps0;
  double max_drift = 0.0;        // max |H(x(t)) - eps0| over accepted states
  double max_step_defect = 0.0;  // max energy error before projection
  Dopri5Stats stats;
};

/// Integration failure; carries the last valid state.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, double t, const PhaseState& x)
      : NumericalError(what + " (last valid state t=" + std::to_string(t) + " " + to_string(x) + ")"),
        t_(t),
        x_(x) {}
  [[nodiscard]] double time() const { return t_; }
  [[nodiscard]] const PhaseState& last_state() const { return x_; }

 private:
  double t_;
  PhaseState x_;
};

/// Right-hand side usable by the stepper: refuses states on the Bloch rim
/// instead of throwing, so the step is retried smaller.
struct HamiltonFlow {
  const ModelParams* params;

  bool operator()(const Vec4& y, Vec4& dy) const {
    const auto x = PhaseState::from_array(y);
    if (!(x.bloch_radius2() < 4.0 - kBlochRimMargin) || !std::isfinite(x.q) || !std::isfinite(x.p)) {
      return false;
    }
    dy = eom_rhs(x, *params);
    return true;
  }
};

/// One or two Newton steps along grad H onto the shell H = eps0.
/// Steps longer than `max_step` are refused: near a stationary point grad H
/// vanishes and the correction would be dominated by roundoff in H.
inline bool project_to_shell(Vec4& y, double eps0, const ModelParams& params, double max_step) {
  bool changed = false;
  for (int it = 0; it < 3; ++it) {
    const auto x = PhaseState::from_array(y);
    const double de = hamiltonian(x, params).eps - eps0;
    if (std::abs(de) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(eps0))) break;
    const Vec4 g = gradient(x, params);
    const double g2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3];
    if (g2 < 1e-300 || std::abs(de) > max_step * std::sqrt(g2)) break;
    for (int i = 0; i < 4; ++i) y[i] -= de * g[i] / g2;
    changed = true;
  }
  return changed;
}

inline void validate_tolerance(double tol) {
  if (!(tol >= 1e-12 && tol <= 1e-6)) {
    std::ostringstream os;
    os << "integration tolerance " << tol << " outside [1e-12, 1e-6]";
    throw ConfigError(os.str());
  }
}

/// Integrates Hamilton's equations on [0, t_max]. `on_step(dense, x)` is
/// called for every accepted step with the step interpolant and new state.
template <class StepObserver>
Trajectory integrate(const PhaseState& x0, double t_max, const ModelParams& params, const FlowOptions& opts,
                     StepObserver&& on_step) {
  validate_tolerance(opts.tol);
  Trajectory traj;
  traj.eps0 = hamiltonian(x0, params);
  const double eps0 = traj.eps0.eps;
  const double bound = opts.drift_bound_factor * std::max(1.0, std::abs(eps0));
  if (opts.store_samples) traj.samples.push_back({0.0, x0});

  Dopri5Options dopt;
  dopt.rtol = opts.tol;
  dopt.atol = opts.tol;
  dopt.max_step = opts.max_step;

  Vec4 y = x0.to_array();
  double t_now = 0.0;
  auto post = [&](Vec4& s) {
    const double defect = std::abs(hamiltonian(PhaseState::from_array(s), params).eps - eps0);
    traj.max_step_defect = std::max(traj.max_step_defect, defect);
    return opts.project_energy && project_to_shell(s, eps0, params, 100.0 * opts.tol);
  };
  auto observe = [&](const DenseStep<4>& dense, const Vec4& s) {
    const auto x = PhaseState::from_array(s);
    t_now = dense.t1();
    const double drift = std::abs(hamiltonian(x, params).eps - eps0);
    traj.max_drift = std::max(traj.max_drift, drift);
    if (drift > bound) {
      std::ostringstream os;
      os.precision(3);
      os << "energy drift " << drift << " exceeds bound " << bound;
      throw IntegrationError(os.str(), t_now, x);
    }
    if (opts.store_samples) traj.samples.push_back({t_now, x});
    on_step(dense, x);
  };
  try {
    traj.stats = integrate_dopri5<4>(HamiltonFlow{&params}, y, 0.0, t_max, dopt, post, observe);
  } catch (const StepUnderflow<4>& e) {
    throw IntegrationError(e.what(), e.time(), PhaseState::from_array(e.last_state()));
  }
  return traj;
}

inline Trajectory integrate(const PhaseState& x0, double t_max, const ModelParams& params,
                            const FlowOptions& opts = {}) {
  return integrate(x0, t_max, params, opts, [](const DenseStep<4>&, const PhaseState&) {});
}

}  // namespace dicke::classical
