#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dicke/classical/phase_space.hpp"

namespace dicke::classical {

enum class CriticalKind { minimum, saddle, maximum };

inline std::string to_string(CriticalKind k) {
  switch (k) {
    case CriticalKind::minimum: return "minimum";
    case CriticalKind::saddle: return "saddle";
    case CriticalKind::maximum: return "maximum";
  }
  return "unknown";
}

struct CriticalPoint {
  PhaseState x;
  ReducedEnergy eps;
  CriticalKind kind = CriticalKind::minimum;
  int morse_index = 0;  // number of negative Hessian eigenvalues
};

/// Newton seeds on the p = P = 0 plane.
struct SeedGrid {
  double q_min = -6.0, q_max = 6.0;
  int q_count = 21;
  double Q_min = -1.9, Q_max = 1.9;
  int Q_count = 21;
};

struct NewtonOptions {
  double gradient_tol = 1e-13;
  int max_iterations = 100;
  double dedup_tol = 1e-6;
};

/// Morse index from the eigenvalues of the full 4x4 Hessian.
inline int morse_index(const PhaseState& x, const ModelParams& params) {
  const Mat4 h = hessian(x, params);
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = h[r][c];
  const Eigen::Vector4d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(m, Eigen::EigenvaluesOnly).eigenvalues();
  return static_cast<int>(std::count_if(ev.begin(), ev.end(), [](double v) { return v < 0.0; }));
}

inline CriticalKind classify(int index) {
  if (index == 0) return CriticalKind::minimum;
  if (index == 4) return CriticalKind::maximum;
  return CriticalKind::saddle;
}

/// Damped Newton iteration on (dH/dq, dH/dQ) = 0 within the p = P = 0 plane.
inline std::optional<PhaseState> newton_on_plane(double q0, double Q0, const ModelParams& params,
                                                 const NewtonOptions& opt = {}) {
  PhaseState x{q0, 0.0, Q0, 0.0};
  auto residual = [&](const PhaseState& s) {
    const Vec4 g = gradient(s, params);
    return std::hypot(g[0], g[2]);
  };
  auto inside = [](const PhaseState& s) { return s.bloch_radius2() < 4.0 - 1e-6; };
  if (!inside(x)) return std::nullopt;
  double res = residual(x);
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (res < opt.gradient_tol) return x;
    const Vec4 g = gradient(x, params);
    const Mat4 h = hessian(x, params);
    const double det = h[0][0] * h[2][2] - h[0][2] * h[2][0];
    if (std::abs(det) < 1e-300) return std::nullopt;
    const double dq = -(h[2][2] * g[0] - h[0][2] * g[2]) / det;
    const double dQ = -(-h[2][0] * g[0] + h[0][0] * g[2]) / det;
    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls, step *= 0.5) {
      PhaseState trial{x.q + step * dq, 0.0, x.Q + step * dQ, 0.0};
      if (!inside(trial)) continue;
      const double r = residual(trial);
      if (r < (1.0 - 1e-4 * step) * res || r < opt.gradient_tol) {
        x = trial;
        res = r;
        accepted = true;
        break;
      }
    }
    if (!accepted) return res < 1e-10 ? std::optional<PhaseState>(x) : std::nullopt;
  }
  return res < opt.gradient_tol ? std::optional<PhaseState>(x) : std::nullopt;
}

/// All stationary points of the classical energy surface reachable from the
/// seed grid, deduplicated and sorted by energy. Seeds whose Newton run does
/// not converge are skipped.
inline std::vector<CriticalPoint> find_critical_points(const ModelParams& params, const SeedGrid& grid = {},
                                                       const NewtonOptions& opt = {}) {
  std::vector<CriticalPoint> found;
  for (int iq = 0; iq < grid.q_count; ++iq) {
    const double q0 =
        grid.q_count == 1 ? grid.q_min : grid.q_min + (grid.q_max - grid.q_min) * iq / (grid.q_count - 1);
    for (int iQ = 0; iQ < grid.Q_count; ++iQ) {
      const double Q0 =
          grid.Q_count == 1 ? grid.Q_min : grid.Q_min + (grid.Q_max - grid.Q_min) * iQ / (grid.Q_count - 1);
      const auto root = newton_on_plane(q0, Q0, params, opt);
      if (!root) continue;
      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const CriticalPoint& c) {
        return std::hypot(c.x.q - root->q, c.x.Q - root->Q) < opt.dedup_tol;
      });
      if (duplicate) continue;
      const int idx = morse_index(*root, params);
      found.push_back({*root, hamiltonian(*root, params), classify(idx), idx});
    }
  }
  std::sort(found.begin(), found.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.eps.eps != b.eps.eps) return a.eps.eps < b.eps.eps;
    return a.x.q < b.x.q;
  });
  return found;
}

/// Closed-form stationary points of the undeformed model (alpha = 0,
/// lambda > lambda_c): the origin and the symmetric pair of minima.
inline std::vector<PhaseState> undeformed_extrema(const ModelParams& m) {
  std::vector<PhaseState> pts{{0.0, 0.0, 0.0, 0.0}};
  const double l2 = m.lambda * m.lambda;
  const double qs2 = 4.0 * l2 / (m.omega * m.omega) - m.omega0 * m.omega0 / (4.0 * l2);
  const double Qs2 = 2.0 - m.omega * m.omega0 / (2.0 * l2);
  if (qs2 > 0.0 && Qs2 > 0.0) {
    pts.push_back({-std::sqrt(qs2), 0.0, std::sqrt(Qs2), 0.0});
    pts.push_back({std::sqrt(qs2), 0.0, -std::sqrt(Qs2), 0.0});
  }
  return pts;
}

}  // namespace dicke::classical
