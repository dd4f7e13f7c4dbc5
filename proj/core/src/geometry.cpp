#include "evac/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace evac {

namespace {

constexpr double kPi = std::numbers::pi;

// Roots of |o + t*d - c|^2 = r^2. Returns the number of real roots (0 or 2).
int line_circle_roots(Vec2 o, Vec2 d, Vec2 c, double r, double roots[2]) {
  const Vec2 m = o - c;
  const double a = d.norm_sq();
  if (a == 0.0) return 0;
  const double b = m.dot(d);
  const double q = m.norm_sq() - r * r;
  const double disc = b * b - a * q;
  if (disc < 0.0) return 0;
  const double s = std::sqrt(disc);
  roots[0] = (-b - s) / a;
  roots[1] = (-b + s) / a;
  return 2;
}

// Endpoints of the radial cap segment of an arc band at polar angle `ang`.
void arc_cap(Vec2 center, double r_in, double r_out, double ang, Vec2& lo, Vec2& hi) {
  const Vec2 e = dir_from_angle(ang);
  lo = center + e * r_in;
  hi = center + e * r_out;
}

}  // namespace

double normalize_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) {
    a += 2.0 * kPi;
  } else if (a > kPi) {
    a -= 2.0 * kPi;
  }
  return a;
}

double dist_point_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len_sq = ab.norm_sq();
  if (len_sq == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len_sq, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

bool segments_intersect(Vec2 a1, Vec2 b1, Vec2 a2, Vec2 b2) {
  const auto cross = [](Vec2 u, Vec2 v) { return u.x * v.y - u.y * v.x; };
  const Vec2 r = b1 - a1;
  const Vec2 s = b2 - a2;
  const double rxs = cross(r, s);
  const Vec2 qp = a2 - a1;
  if (rxs == 0.0) {
    // Parallel: overlap is caught by the endpoint-distance candidates in
    // dist_segment_segment, so only the collinear-touch case matters here.
    return false;
  }
  const double t = cross(qp, s) / rxs;
  const double u = cross(qp, r) / rxs;
  return t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0;
}

double dist_segment_segment(Vec2 a1, Vec2 b1, Vec2 a2, Vec2 b2) {
  if (segments_intersect(a1, b1, a2, b2)) return 0.0;
  double d = dist_point_segment(a1, a2, b2);
  d = std::min(d, dist_point_segment(b1, a2, b2));
  d = std::min(d, dist_point_segment(a2, a1, b1));
  d = std::min(d, dist_point_segment(b2, a1, b1));
  return d;
}

double dist_point_arc_band(Vec2 p, Vec2 center, double r_in, double r_out,
                           double material_heading, double half_span) {
  const Vec2 q = p - center;
  const double d = q.norm();
  const double dpsi = normalize_angle(std::atan2(q.y, q.x) - material_heading);
  if (std::abs(dpsi) <= half_span) {
    if (d < r_in) return r_in - d;
    if (d > r_out) return d - r_out;
    return 0.0;
  }
  Vec2 lo, hi;
  arc_cap(center, r_in, r_out, material_heading - half_span, lo, hi);
  double best = dist_point_segment(p, lo, hi);
  arc_cap(center, r_in, r_out, material_heading + half_span, lo, hi);
  best = std::min(best, dist_point_segment(p, lo, hi));
  return best;
}

double dist_segment_arc_band(Vec2 a, Vec2 b, Vec2 center, double r_in, double r_out,
                             double material_heading, double half_span) {
  const auto in_span = [&](Vec2 p) {
    const Vec2 q = p - center;
    return std::abs(normalize_angle(std::atan2(q.y, q.x) - material_heading)) <= half_span;
  };

  double best = std::min(
      dist_point_arc_band(a, center, r_in, r_out, material_heading, half_span),
      dist_point_arc_band(b, center, r_in, r_out, material_heading, half_span));
  if (best == 0.0) return 0.0;

  // Crossings of either bounding circle inside the material span touch the band.
  const Vec2 d = b - a;
  for (double r : {r_in, r_out}) {
    double roots[2];
    const int n = line_circle_roots(a, d, center, r, roots);
    for (int i = 0; i < n; ++i) {
      if (roots[i] < 0.0 || roots[i] > 1.0) continue;
      if (in_span(a + d * roots[i])) return 0.0;
    }
  }

  // Cap segments at the span boundaries.
  for (double sgn : {-1.0, 1.0}) {
    Vec2 lo, hi;
    arc_cap(center, r_in, r_out, material_heading + sgn * half_span, lo, hi);
    best = std::min(best, dist_segment_segment(a, b, lo, hi));
  }

  // Interior critical point: the segment point closest to the arc center.
  const double len_sq = d.norm_sq();
  if (len_sq > 0.0) {
    const double t = std::clamp((center - a).dot(d) / len_sq, 0.0, 1.0);
    const Vec2 p = a + d * t;
    if (in_span(p)) {
      const double dist_c = (p - center).norm();
      if (dist_c < r_in) {
        best = std::min(best, r_in - dist_c);
      } else if (dist_c > r_out) {
        best = std::min(best, dist_c - r_out);
      } else {
        return 0.0;
      }
    }
  }
  return best;
}

}  // namespace evac
