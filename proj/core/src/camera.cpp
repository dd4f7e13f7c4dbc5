#include "evac/camera.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace evac {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTMin = 1e-9;

struct Ray {
  Vec3 origin;
  Vec3 dir;
};

struct Hit {
  double t = std::numeric_limits<double>::infinity();
  Color color = kSkyColor;

  void consider(double t_cand, Color c) {
    if (t_cand > kTMin && t_cand < t) {
      t = t_cand;
      color = c;
    }
  }
};

// Wall plane constants per wall index: axis (0=x, 1=y) and plane coordinate.
struct WallPlane {
  int axis;
  double coord;
};

WallPlane wall_plane(const RoomSpec& room, int wall_index) {
  const double h = room.half_extent;
  switch (wall_index) {
    case 0: return {1, -h};
    case 1: return {0, h};
    case 2: return {1, h};
    default: return {0, -h};
  }
}

void intersect_walls(const Ray& ray, const WorldState& world, Hit& hit) {
  const RoomSpec& room = world.room;
  for (int w = 0; w < 4; ++w) {
    const WallPlane plane = wall_plane(room, w);
    const double d = plane.axis == 0 ? ray.dir.x : ray.dir.y;
    if (d == 0.0) continue;
    const double o = plane.axis == 0 ? ray.origin.x : ray.origin.y;
    const double t = (plane.coord - o) / d;
    if (t <= kTMin) continue;
    const double along = plane.axis == 0 ? ray.origin.y + t * ray.dir.y
                                         : ray.origin.x + t * ray.dir.x;
    const double z = ray.origin.z + t * ray.dir.z;
    if (std::abs(along) > room.half_extent) continue;
    if (z < 0.0 || z > room.wall_height) continue;
    Color c = kWallColor;
    if (w == world.exit.wall_index &&
        std::abs(along - world.exit.center_offset) <= room.exit_width / 2.0 &&
        z <= room.exit_height) {
      c = kExitColor;
    }
    hit.consider(t, c);
  }
}

// t-values where the ray's ground projection crosses the circle |p - c| = r.
int ground_circle_roots(const Ray& ray, Vec2 c, double r, double roots[2]) {
  const Vec2 o{ray.origin.x - c.x, ray.origin.y - c.y};
  const Vec2 d{ray.dir.x, ray.dir.y};
  const double a = d.norm_sq();
  if (a == 0.0) return 0;
  const double b = o.dot(d);
  const double q = o.norm_sq() - r * r;
  const double disc = b * b - a * q;
  if (disc < 0.0) return 0;
  const double s = std::sqrt(disc);
  roots[0] = (-b - s) / a;
  roots[1] = (-b + s) / a;
  return 2;
}

void intersect_cylinder(const Ray& ray, const Obstacle& o, Hit& hit) {
  double roots[2];
  const int n = ground_circle_roots(ray, o.center, o.radius, roots);
  for (int i = 0; i < n; ++i) {
    const double z = ray.origin.z + roots[i] * ray.dir.z;
    if (z >= 0.0 && z <= o.height) hit.consider(roots[i], kObstacleColor);
  }
}

void intersect_arc(const Ray& ray, const Obstacle& o, Hit& hit) {
  const double material_heading = normalize_angle(o.opening_heading + kPi);
  const double inner = o.radius - o.thickness;

  // Curved faces.
  for (double r : {inner, o.radius}) {
    double roots[2];
    const int n = ground_circle_roots(ray, o.center, r, roots);
    for (int i = 0; i < n; ++i) {
      const double z = ray.origin.z + roots[i] * ray.dir.z;
      if (z < 0.0 || z > o.height) continue;
      const Vec2 q{ray.origin.x + roots[i] * ray.dir.x - o.center.x,
                   ray.origin.y + roots[i] * ray.dir.y - o.center.y};
      if (std::abs(normalize_angle(std::atan2(q.y, q.x) - material_heading)) <= kPi / 2.0) {
        hit.consider(roots[i], kObstacleColor);
      }
    }
  }

  // Radial end caps: vertical rectangles at the span boundaries.
  for (double sgn : {-1.0, 1.0}) {
    const double ang = material_heading + sgn * kPi / 2.0;
    const Vec2 radial = dir_from_angle(ang);
    const Vec2 normal{-radial.y, radial.x};
    const double denom = ray.dir.x * normal.x + ray.dir.y * normal.y;
    if (denom == 0.0) continue;
    const double t =
        ((o.center.x - ray.origin.x) * normal.x + (o.center.y - ray.origin.y) * normal.y) /
        denom;
    if (t <= kTMin) continue;
    const double z = ray.origin.z + t * ray.dir.z;
    if (z < 0.0 || z > o.height) continue;
    const Vec2 q{ray.origin.x + t * ray.dir.x - o.center.x,
                 ray.origin.y + t * ray.dir.y - o.center.y};
    const double rho = q.dot(radial);
    if (rho >= inner && rho <= o.radius) hit.consider(t, kObstacleColor);
  }
}

}  // namespace

Vec3 ray_from_plane(double u, double v_up) {
  // Inverse stereographic projection in rational form: off-axis angle is
  // exactly 2*atan(rho) with rho^2 = u^2 + v^2.
  const double rho_sq = u * u + v_up * v_up;
  const double inv = 1.0 / (1.0 + rho_sq);
  return {(1.0 - rho_sq) * inv, 2.0 * u * inv, 2.0 * v_up * inv};
}

void pixel_plane_coords(int col, int row, const LensModel& lens, double& u, double& v_up) {
  u = static_cast<double>(2 * col - (kImageWidth - 1)) / kImageWidth;
  v_up = -static_cast<double>(2 * row - (kImageHeight - 1)) / kImageHeight *
         lens.vertical_half_extent;
}

Vec3 pixel_to_ray(int col, int row, const LensModel& lens) {
  double u, v_up;
  pixel_plane_coords(col, row, lens, u, v_up);
  return ray_from_plane(u, v_up);
}

ImageState render(const WorldState& world, const LensModel& lens) {
  const double reach = world.room.half_extent + world.room.exit_depth;
  if (!std::isfinite(world.agent.x) || !std::isfinite(world.agent.y) ||
      std::abs(world.agent.x) > reach || std::abs(world.agent.y) > reach) {
    throw std::invalid_argument("render: agent pose outside the room");
  }

  const Vec2 fwd = dir_from_angle(world.agent.theta);
  const Vec2 right{fwd.y, -fwd.x};
  const Vec3 origin{world.agent.x, world.agent.y, lens.camera_height};

  ImageState image;
  for (int row = 0; row < kImageHeight; ++row) {
    for (int col = 0; col < kImageWidth; ++col) {
      const Vec3 cam = pixel_to_ray(col, row, lens);
      Ray ray{origin,
              {cam.x * fwd.x + cam.y * right.x, cam.x * fwd.y + cam.y * right.y, cam.z}};

      Hit hit;
      intersect_walls(ray, world, hit);
      for (const Obstacle& o : world.obstacles) {
        if (o.kind == ObstacleKind::Cylinder) {
          intersect_cylinder(ray, o, hit);
        } else {
          intersect_arc(ray, o, hit);
        }
      }
      if (ray.dir.z < 0.0) {
        hit.consider(-origin.z / ray.dir.z, kFloorColor);
      }

      image.at(row, col, 0) = hit.color.r;
      image.at(row, col, 1) = hit.color.g;
      image.at(row, col, 2) = hit.color.b;
    }
  }
  return image;
}

void write_ppm(std::ostream& out, const ImageState& image, int scale) {
  out << "P6\n" << kImageWidth * scale << " " << kImageHeight * scale << "\n255\n";
  for (int row = 0; row < kImageHeight; ++row) {
    for (int sy = 0; sy < scale; ++sy) {
      for (int col = 0; col < kImageWidth; ++col) {
        const char px[3] = {static_cast<char>(image.at(row, col, 0)),
                            static_cast<char>(image.at(row, col, 1)),
                            static_cast<char>(image.at(row, col, 2))};
        for (int sx = 0; sx < scale; ++sx) out.write(px, 3);
      }
    }
  }
}

}  // namespace evac
