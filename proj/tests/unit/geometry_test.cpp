#include "evac/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "evac/rng.hpp"

namespace evac {
namespace {

constexpr double kPi = std::numbers::pi;

// Brute-force distance between a point and an annular sector, by dense
// sampling of the sector boundary. Independent of the analytic routine.
double sampled_point_arc_band(Vec2 p, Vec2 center, double r_in, double r_out,
                              double material_heading, double half_span) {
  double best = 1e9;
  const int n = 4000;
  for (int i = 0; i <= n; ++i) {
    const double ang = material_heading - half_span + 2.0 * half_span * i / n;
    for (double r : {r_in, r_out}) {
      const Vec2 q = center + dir_from_angle(ang) * r;
      best = std::min(best, (p - q).norm());
    }
  }
  for (double sgn : {-1.0, 1.0}) {
    const double ang = material_heading + sgn * half_span;
    for (int i = 0; i <= n; ++i) {
      const double r = r_in + (r_out - r_in) * i / n;
      const Vec2 q = center + dir_from_angle(ang) * r;
      best = std::min(best, (p - q).norm());
    }
  }
  // Inside the solid counts as distance zero.
  const Vec2 rel = p - center;
  const double d = rel.norm();
  const double dpsi = normalize_angle(std::atan2(rel.y, rel.x) - material_heading);
  if (d >= r_in && d <= r_out && std::abs(dpsi) <= half_span) return 0.0;
  return best;
}

TEST(NormalizeAngle, WrapsIntoHalfOpenRange) {
  EXPECT_DOUBLE_EQ(normalize_angle(0.0), 0.0);
  EXPECT_DOUBLE_EQ(normalize_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(normalize_angle(-kPi), kPi);
  EXPECT_DOUBLE_EQ(normalize_angle(3.0 * kPi / 2.0), -kPi / 2.0);
  EXPECT_NEAR(normalize_angle(7.0 * kPi), kPi, 1e-12);
  for (double a = -20.0; a < 20.0; a += 0.137) {
    const double n = normalize_angle(a);
    EXPECT_GT(n, -kPi);
    EXPECT_LE(n, kPi);
    EXPECT_NEAR(std::cos(n), std::cos(a), 1e-9);
    EXPECT_NEAR(std::sin(n), std::sin(a), 1e-9);
  }
}

TEST(DistPointSegment, BasicCases) {
  EXPECT_DOUBLE_EQ(dist_point_segment({0, 1}, {-1, 0}, {1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(dist_point_segment({2, 0}, {-1, 0}, {1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(dist_point_segment({0, 0}, {0, 0}, {0, 0}), 0.0);
  EXPECT_NEAR(dist_point_segment({3, 4}, {0, 0}, {0, 0}), 5.0, 1e-15);
}

TEST(DistSegmentSegment, CrossingIsZero) {
  EXPECT_DOUBLE_EQ(dist_segment_segment({-1, 0}, {1, 0}, {0, -1}, {0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(dist_segment_segment({-1, 1}, {1, 1}, {0, -1}, {0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(dist_segment_segment({-1, 2}, {1, 2}, {0, -1}, {0, 1}), 1.0);
}

TEST(DistSegmentSegment, MatchesSampledMinimum) {
  Rng rng(11);
  for (int iter = 0; iter < 300; ++iter) {
    const Vec2 a1{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const Vec2 b1{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const Vec2 a2{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const Vec2 b2{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    double sampled = 1e9;
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
      const Vec2 p = a1 + (b1 - a1) * (static_cast<double>(i) / n);
      sampled = std::min(sampled, dist_point_segment(p, a2, b2));
    }
    const double exact = dist_segment_segment(a1, b1, a2, b2);
    EXPECT_LE(exact, sampled + 1e-12);
    EXPECT_NEAR(exact, sampled, 2e-2);
  }
}

TEST(DistPointArcBand, InsideOutsideAndCaps) {
  const Vec2 c{0, 0};
  // Material on the west half (opening faces east): heading pi.
  const double mat = kPi;
  const double hs = kPi / 2.0;
  EXPECT_DOUBLE_EQ(dist_point_arc_band({-0.55, 0}, c, 0.5, 0.6, mat, hs), 0.0);
  EXPECT_NEAR(dist_point_arc_band({-0.3, 0}, c, 0.5, 0.6, mat, hs), 0.2, 1e-12);
  EXPECT_NEAR(dist_point_arc_band({-0.8, 0}, c, 0.5, 0.6, mat, hs), 0.2, 1e-12);
  // Directly east of center: the open mouth; nearest material is a cap end.
  EXPECT_NEAR(dist_point_arc_band({0.2, 0}, c, 0.5, 0.6, mat, hs),
              std::hypot(0.2, 0.5), 1e-12);
}

TEST(DistPointArcBand, MatchesSampledBoundary) {
  Rng rng(12);
  for (int iter = 0; iter < 300; ++iter) {
    const Vec2 center{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)};
    const double mat = rng.uniform(-kPi, kPi);
    const Vec2 p{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    const double exact = dist_point_arc_band(p, center, 0.5, 0.6, mat, kPi / 2.0);
    const double sampled = sampled_point_arc_band(p, center, 0.5, 0.6, mat, kPi / 2.0);
    EXPECT_NEAR(exact, sampled, 1e-5) << "iter " << iter;
  }
}

TEST(DistSegmentArcBand, MatchesSampledSweep) {
  Rng rng(13);
  for (int iter = 0; iter < 300; ++iter) {
    const Vec2 center{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)};
    const double mat = rng.uniform(-kPi, kPi);
    const Vec2 a{rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)};
    const Vec2 b = a + dir_from_angle(rng.uniform(-kPi, kPi)) * 0.1524;
    const double exact = dist_segment_arc_band(a, b, center, 0.5, 0.6, mat, kPi / 2.0);
    double sampled = 1e9;
    const int n = 2000;
    for (int i = 0; i <= n; ++i) {
      const Vec2 p = a + (b - a) * (static_cast<double>(i) / n);
      sampled = std::min(sampled, dist_point_arc_band(p, center, 0.5, 0.6, mat, kPi / 2.0));
    }
    EXPECT_LE(exact, sampled + 1e-12) << "iter " << iter;
    EXPECT_NEAR(exact, sampled, 1e-4) << "iter " << iter;
  }
}

}  // namespace
}  // namespace evac
