#pragma once

#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "dicke/error.hpp"
#include "dicke/model.hpp"

namespace dicke::classical {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;

/// Point (q, p, Q, P) of the scaled four-dimensional phase space. (q, p) are
/// the boson quadratures, (Q, P) the Bloch-disk coordinates of the spin.
struct PhaseState {
  double q = 0.0;
  double p = 0.0;
  double Q = 0.0;
  double P = 0.0;

  [[nodiscard]] Vec4 to_array() const { return {q, p, Q, P}; }
  [[nodiscard]] static PhaseState from_array(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
  [[nodiscard]] double bloch_radius2() const { return Q * Q + P * P; }

  friend bool operator==(const PhaseState&, const PhaseState&) = default;
};

inline std::string to_string(const PhaseState& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(q=" << x.q << ", p=" << x.p << ", Q=" << x.Q << ", P=" << x.P << ")";
  return os.str();
}

/// Radicands this close below zero are treated as roundoff on the Bloch rim.
inline constexpr double kBlochClamp = 1e-14;
/// Gradients are refused once Q^2 + P^2 comes this close to 4.
inline constexpr double kBlochRimMargin = 1e-12;

namespace detail {

struct Coefficients {
  double a;  // omega / omega0
  double b;  // 2 lambda / omega0
  double c;  // sqrt(2 / omega0) alpha
};

inline Coefficients coefficients(const ModelParams& m) {
  return {m.omega / m.omega0, 2.0 * m.lambda / m.omega0, std::sqrt(2.0 / m.omega0) * m.alpha};
}

inline double bloch_root(const PhaseState& x) {
  double rad = 1.0 - 0.25 * x.bloch_radius2();
  if (rad < 0.0) {
    if (rad < -kBlochClamp) {
      throw DomainError("phase state outside the Bloch disk (Q^2+P^2 > 4): " + to_string(x));
    }
    rad = 0.0;
  }
  return std::sqrt(rad);
}

inline void require_interior(const PhaseState& x) {
  if (x.bloch_radius2() >= 4.0 - kBlochRimMargin) {
    throw DomainError("phase state on or near the Bloch rim, derivatives are singular: " + to_string(x));
  }
}

}  // namespace detail

/// Classical energy surface in reduced units, i.e. <GB|H|GB> / (omega0 j).
[[nodiscard]] inline ReducedEnergy hamiltonian(const PhaseState& x, const ModelParams& m) {
  const auto [a, b, c] = detail::coefficients(m);
  const double s = detail::bloch_root(x);
  return {0.5 * a * (x.q * x.q + x.p * x.p) + 0.5 * x.bloch_radius2() + b * x.q * x.Q * s - 1.0 + c * x.q};
}

/// Analytic partial derivatives (dH/dq, dH/dp, dH/dQ, dH/dP).
[[nodiscard]] inline Vec4 gradient(const PhaseState& x, const ModelParams& m) {
  detail::require_interior(x);
  const auto [a, b, c] = detail::coefficients(m);
  const double s = detail::bloch_root(x);
  return {
      a * x.q + b * x.Q * s + c,
      a * x.p,
      x.Q + b * x.q * (s - x.Q * x.Q / (4.0 * s)),
      x.P - b * x.q * x.Q * x.P / (4.0 * s),
  };
}

/// Analytic second-derivative matrix, ordered (q, p, Q, P).
[[nodiscard]] inline Mat4 hessian(const PhaseState& x, const ModelParams& m) {
  detail::require_interior(x);
  const auto k = detail::coefficients(m);
  const double a = k.a, b = k.b;
  const double s = detail::bloch_root(x);
  const double s3 = s * s * s;
  const double q = x.q, Q = x.Q, P = x.P;

  Mat4 h{};
  h[0][0] = a;
  h[1][1] = a;
  h[0][2] = h[2][0] = b * (s - Q * Q / (4.0 * s));
  h[0][3] = h[3][0] = -b * Q * P / (4.0 * s);
  h[2][2] = 1.0 - b * q * (3.0 * Q / (4.0 * s) + Q * Q * Q / (16.0 * s3));
  h[2][3] = h[3][2] = -b * q * (P / (4.0 * s) + Q * Q * P / (16.0 * s3));
  h[3][3] = 1.0 - b * q * Q * (1.0 / (4.0 * s) + P * P / (16.0 * s3));
  return h;
}

/// Hamilton's equations: (dq/dt, dp/dt, dQ/dt, dP/dt) = (H_p, -H_q, H_P, -H_Q).
[[nodiscard]] inline Vec4 eom_rhs(const PhaseState& x, const ModelParams& m) {
  const Vec4 g = gradient(x, m);
  return {g[1], -g[0], g[3], -g[2]};
}

}  // namespace dicke::classical
