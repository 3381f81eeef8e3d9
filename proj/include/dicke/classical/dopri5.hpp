#pragma once

// Dormand-Prince 5(4) integrator with step-size control and the standard
// fourth-order continuous extension (Hairer, Norsett & Wanner, "Solving ODEs I").
//
// Generic over the state dimension so the same stepper drives both the
// phase-space flow and the flow augmented with its tangent dynamics.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>

#include "dicke/error.hpp"

namespace dicke::classical {

template <std::size_t N>
using StateN = std::array<double, N>;

struct Dopri5Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double initial_step = 0.0;  // 0 selects an automatic first step
  double max_step = 0.0;      // 0 means unbounded
  std::size_t max_steps = 50'000'000;
  std::size_t max_rejections_in_a_row = 200;
};

/// Polynomial interpolant of one accepted step on [t0, t0 + h].
template <std::size_t N>
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  std::array<StateN<N>, 5> r{};

  [[nodiscard]] double t1() const { return t0 + h; }

  [[nodiscard]] double component(std::size_t i, double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    return r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
  }

  [[nodiscard]] StateN<N> at(double t) const {
    StateN<N> y{};
    for (std::size_t i = 0; i < N; ++i) y[i] = component(i, t);
    return y;
  }
};

struct Dopri5Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

/// Thrown when the step size collapses; carries the last accepted state.
template <std::size_t N>
class StepUnderflow : public NumericalError {
 public:
  StepUnderflow(const std::string& what, double t, const StateN<N>& y)
      : NumericalError(what), t_(t), y_(y) {}
  [[nodiscard]] double time() const { return t_; }
  [[nodiscard]] const StateN<N>& last_state() const { return y_; }

 private:
  double t_;
  StateN<N> y_;
};

namespace dopri5_tableau {
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                        a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                        a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace dopri5_tableau

/// Integrates y' = f(y) from t0 to t1.
///
/// `rhs(y, dydt)` returns false when y lies outside the model's domain; the
/// step is then rejected and retried with a smaller size. `post_step(y)` runs
/// on every accepted state and returns true if it changed y (e.g. a
/// projection). `observer(dense, y)` sees every accepted step.
template <std::size_t N, class Rhs, class PostStep, class Observer>
Dopri5Stats integrate_dopri5(Rhs&& rhs, StateN<N>& y, double t0, double t1, const Dopri5Options& opt,
                             PostStep&& post_step, Observer&& observer) {
  using namespace dopri5_tableau;
  using S = StateN<N>;
  Dopri5Stats stats;
  if (!(t1 > t0)) return stats;

  auto eval = [&](const S& x, S& dx) {
    ++stats.rhs_evaluations;
    return rhs(x, dx);
  };
  auto axpy = [](const S& base, double h, std::initializer_list<std::pair<double, const S*>> terms) {
    S out = base;
    for (const auto& [w, k] : terms) {
      for (std::size_t i = 0; i < N; ++i) out[i] += h * w * (*k)[i];
    }
    return out;
  };
  auto scale = [&](const S& a, const S& b, std::size_t i) {
    return opt.atol + opt.rtol * std::max(std::abs(a[i]), std::abs(b[i]));
  };

  S k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{};
  if (!eval(y, k1)) {
    throw StepUnderflow<N>("initial state outside the integration domain", t0, y);
  }

  const double span = t1 - t0;
  double h = opt.initial_step;
  if (h <= 0.0) {
    // Hairer's starting-step heuristic.
    double d0 = 0.0, d1n = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = opt.atol + opt.rtol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1n += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / N);
    d1n = std::sqrt(d1n / N);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h = std::min(h0, span);
    S y1 = axpy(y, h, {{1.0, &k1}});
    S f1{};
    if (eval(y1, f1)) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double sc = opt.atol + opt.rtol * std::abs(y[i]);
        d2 += ((f1[i] - k1[i]) / sc) * ((f1[i] - k1[i]) / sc);
      }
      d2 = std::sqrt(d2 / N) / h;
      const double dm = std::max(d1n, d2);
      const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
      h = std::min({100.0 * h0, h1, span});
    }
  }
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

  constexpr double kSafety = 0.9, kFacMin = 0.2, kFacMax = 10.0, kBeta = 0.04;
  double err_old = 1e-4;
  double t = t0;
  std::size_t rejections_in_a_row = 0;
  bool last_rejected = false;

  while (t < t1) {
    if (stats.accepted >= opt.max_steps) {
      throw StepUnderflow<N>("maximum number of integration steps exceeded", t, y);
    }
    if (t + h > t1 || t1 - (t + h) < 1e-12 * std::abs(t1)) h = t1 - t;
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      std::ostringstream os;
      os.precision(17);
      os << "step size underflow at t=" << t;
      throw StepUnderflow<N>(os.str(), t, y);
    }

    bool in_domain = true;
    S y2 = axpy(y, h, {{a21, &k1}});
    in_domain = in_domain && eval(y2, k2);
    S y3 = in_domain ? axpy(y, h, {{a31, &k1}, {a32, &k2}}) : y;
    in_domain = in_domain && eval(y3, k3);
    S y4 = in_domain ? axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}) : y;
    in_domain = in_domain && eval(y4, k4);
    S y5 = in_domain ? axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}) : y;
    in_domain = in_domain && eval(y5, k5);
    S y6 = in_domain ? axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}) : y;
    in_domain = in_domain && eval(y6, k6);
    S ynew = in_domain ? axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}}) : y;
    in_domain = in_domain && eval(ynew, k7);

    if (!in_domain) {
      ++stats.rejected;
      if (++rejections_in_a_row > opt.max_rejections_in_a_row) {
        throw StepUnderflow<N>("repeated step rejections at the domain boundary", t, y);
      }
      h *= 0.25;
      last_rejected = true;
      continue;
    }

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double r = ei / scale(y, ynew, i);
      err += r * r;
    }
    err = std::sqrt(err / N);

    if (!std::isfinite(err)) {
      ++stats.rejected;
      h *= 0.25;
      last_rejected = true;
      continue;
    }

    if (err <= 1.0) {
      // A post-step correction moves the endpoint; the interpolant is built
      // on the corrected endpoint so consecutive steps join continuously.
      if (post_step(ynew)) {
        if (!eval(ynew, k7)) throw StepUnderflow<N>("post-step correction left the domain", t, y);
      }
      DenseStep<N> dense;
      dense.t0 = t;
      dense.h = h;
      for (std::size_t i = 0; i < N; ++i) {
        const double dy = ynew[i] - y[i];
        const double bspl = h * k1[i] - dy;
        dense.r[0][i] = y[i];
        dense.r[1][i] = dy;
        dense.r[2][i] = bspl;
        dense.r[3][i] = dy - h * k7[i] - bspl;
        dense.r[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      t = (h == t1 - t) ? t1 : t + h;
      y = ynew;
      k1 = k7;
      observer(dense, y);
      ++stats.accepted;
      rejections_in_a_row = 0;

      double fac = std::pow(err, 0.2 - 0.75 * kBeta) * std::pow(err_old, -kBeta) / kSafety;
      fac = std::clamp(fac, 1.0 / kFacMax, 1.0 / kFacMin);
      double hnew = h / fac;
      if (last_rejected) hnew = std::min(hnew, h);
      if (opt.max_step > 0.0) hnew = std::min(hnew, opt.max_step);
      err_old = std::max(err, 1e-4);
      last_rejected = false;
      h = hnew;
    } else {
      ++stats.rejected;
      if (++rejections_in_a_row > opt.max_rejections_in_a_row) {
        throw StepUnderflow<N>("error control failed to converge", t, y);
      }
      h /= std::min(1.0 / kFacMin, std::pow(err, 0.2) / kSafety);
      last_rejected = true;
    }
  }
  return stats;
}

}  // namespace dicke::classical
