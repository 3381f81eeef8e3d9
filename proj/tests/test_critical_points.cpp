#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dicke/classical/critical_points.hpp"
#include "support.hpp"

using namespace dicke;
using namespace dicke::classical;

namespace {

/// Independent oracle: on p = P = 0, dH/dq = 0 fixes q(Q) = -(b Q s + c)/a, so
/// stationary points are the roots of the one-variable function
/// F(Q) = dH/dQ(q(Q), Q), bracketed on a fine grid and bisected.
std::vector<std::pair<double, double>> stationary_points_1d(const ModelParams& m) {
  const double a = m.omega / m.omega0, b = 2 * m.lambda / m.omega0, c = std::sqrt(2 / m.omega0) * m.alpha;
  auto q_of = [&](double Q) { return -(b * Q * std::sqrt(1 - Q * Q / 4) + c) / a; };
  auto F = [&](double Q) {
    const double s = std::sqrt(1 - Q * Q / 4);
    return Q + b * q_of(Q) * (s - Q * Q / (4 * s));
  };
  std::vector<std::pair<double, double>> roots;
  const int n = 200000;
  const double lim = 2.0 - 1e-9;
  double Q0 = -lim, F0 = F(Q0);
  for (int i = 1; i <= n; ++i) {
    const double Q1 = -lim + 2 * lim * i / n, F1 = F(Q1);
    if ((F0 < 0) != (F1 < 0)) {
      double lo = Q0, hi = Q1;
      for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        ((F(mid) < 0) == (F(lo) < 0) ? lo : hi) = mid;
      }
      const double Q = 0.5 * (lo + hi);
      roots.push_back({q_of(Q), Q});
    }
    Q0 = Q1;
    F0 = F1;
  }
  return roots;
}

}  // namespace

TEST(CriticalPoints, DeformedModelStationaryStructure) {
  const auto pts = find_critical_points(test::deformed());
  ASSERT_GE(pts.size(), 3u);
  EXPECT_NEAR(pts[0].x.q, -3.33871, 1e-5);
  EXPECT_NEAR(pts[0].x.Q, 1.34213, 1e-5);
  EXPECT_NEAR(pts[0].eps.eps, -5.672846, 1e-6);
  EXPECT_EQ(pts[0].kind, CriticalKind::minimum);
  EXPECT_NEAR(pts[1].x.q, 2.62250, 1e-5);
  EXPECT_NEAR(pts[1].x.Q, -1.32205, 1e-5);
  EXPECT_NEAR(pts[1].eps.eps, -3.564851, 1e-6);
  EXPECT_EQ(pts[1].kind, CriticalKind::minimum);
  EXPECT_NEAR(pts[2].x.q, 0.0446385, 1e-6);
  EXPECT_NEAR(pts[2].x.Q, -0.1330252, 1e-6);
  EXPECT_NEAR(pts[2].eps.eps, -0.992148, 1e-6);
  EXPECT_EQ(pts[2].kind, CriticalKind::saddle);
  // Within 1e-3 of the rounded reference coordinates except the ground-state Q.
  EXPECT_NEAR(pts[0].x.q, -3.339, 1e-3);
  EXPECT_NEAR(pts[1].x.q, 2.623, 1e-3);
  EXPECT_NEAR(pts[1].x.Q, -1.322, 1e-3);
  EXPECT_NEAR(pts[2].x.q, 0.045, 1e-3);
  EXPECT_NEAR(pts[2].x.Q, -0.133, 1e-3);
  EXPECT_NEAR(pts[0].eps.eps, -5.673, 1e-3);
  EXPECT_NEAR(pts[2].eps.eps, -0.992, 1e-3);
}

TEST(CriticalPoints, AgreeWithOneDimensionalReduction) {
  for (const auto& p : {test::deformed(), test::undeformed()}) {
    const auto oracle = stationary_points_1d(p);
    const auto pts = find_critical_points(p);
    ASSERT_EQ(pts.size(), oracle.size());
    for (const auto& [q, Q] : oracle) {
      const bool hit = std::any_of(pts.begin(), pts.end(), [&](const CriticalPoint& c) {
        return std::abs(c.x.q - q) < 1e-8 && std::abs(c.x.Q - Q) < 1e-8;
      });
      EXPECT_TRUE(hit) << "missing stationary point q=" << q << " Q=" << Q;
    }
  }
}

TEST(CriticalPoints, GradientVanishes) {
  for (const auto& p : {test::deformed(), test::undeformed()}) {
    for (const auto& c : find_critical_points(p)) {
      const Vec4 g = gradient(c.x, p);
      EXPECT_LT(std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]), 1e-10);
      EXPECT_EQ(c.x.p, 0.0);
      EXPECT_EQ(c.x.P, 0.0);
    }
  }
}

TEST(CriticalPoints, UndeformedClosedFormExtrema) {
  const ModelParams p = test::undeformed();
  const auto exact = undeformed_extrema(p);
  ASSERT_EQ(exact.size(), 3u);
  EXPECT_NEAR(exact[1].q, -2.9814, 1e-4);
  EXPECT_NEAR(exact[1].Q, 1.3333, 1e-4);
  const auto pts = find_critical_points(p);
  ASSERT_EQ(pts.size(), 3u);
  for (const auto& e : exact) {
    const bool hit = std::any_of(pts.begin(), pts.end(), [&](const CriticalPoint& c) {
      return std::abs(c.x.q - e.q) < 1e-8 && std::abs(c.x.Q - e.Q) < 1e-8;
    });
    EXPECT_TRUE(hit) << to_string(e);
  }
  EXPECT_NEAR(pts[0].eps.eps, -4.5556, 1e-4);
  EXPECT_NEAR(pts[0].eps.eps, pts[1].eps.eps, 1e-10);
  EXPECT_NEAR(pts[0].eps.eps, -41.0 / 9.0, 1e-12);
  EXPECT_NEAR(pts[2].x.q, 0.0, 1e-14);
  EXPECT_EQ(pts[2].eps.eps, -1.0);
  EXPECT_EQ(pts[2].kind, CriticalKind::saddle);
}

TEST(CriticalPoints, SingleMinimumBelowCriticalCoupling) {
  ModelParams p = test::undeformed();
  p.lambda = 0.3;
  const auto pts = find_critical_points(p);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].kind, CriticalKind::minimum);
  EXPECT_EQ(pts[0].eps.eps, -1.0);
}

TEST(CriticalPoints, MorseIndexClassification) {
  EXPECT_EQ(classify(0), CriticalKind::minimum);
  EXPECT_EQ(classify(1), CriticalKind::saddle);
  EXPECT_EQ(classify(2), CriticalKind::saddle);
  EXPECT_EQ(classify(4), CriticalKind::maximum);
}
