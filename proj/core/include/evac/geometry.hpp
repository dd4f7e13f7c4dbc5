#pragma once

#include <cmath>

namespace evac {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  double norm_sq() const { return x * x + y * y; }
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
};

inline Vec2 dir_from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Wraps an angle into (-pi, pi].
double normalize_angle(double a);

double dist_point_segment(Vec2 p, Vec2 a, Vec2 b);

bool segments_intersect(Vec2 a1, Vec2 b1, Vec2 a2, Vec2 b2);

double dist_segment_segment(Vec2 a1, Vec2 b1, Vec2 a2, Vec2 b2);

/// Distance from a point to a solid annular sector (a curved wall band).
/// The material occupies radii [r_in, r_out] around `center`, at polar angles
/// within `half_span` of `material_heading`. Returns 0 for points inside.
double dist_point_arc_band(Vec2 p, Vec2 center, double r_in, double r_out,
                           double material_heading, double half_span);

/// Minimum distance from segment [a, b] to the annular sector above.
double dist_segment_arc_band(Vec2 a, Vec2 b, Vec2 center, double r_in, double r_out,
                             double material_heading, double half_span);

}  // namespace evac
