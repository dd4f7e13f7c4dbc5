#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>

#include "evac/geometry.hpp"
#include "evac/world.hpp"

namespace evac {

inline constexpr int kImageWidth = 20;
inline constexpr int kImageHeight = 7;
inline constexpr int kImageBytes = kImageWidth * kImageHeight * 3;

/// The agent's observation: 7 rows x 20 columns x RGB, flattened row-major,
/// top row first, channels interleaved.
struct ImageState {
  std::array<std::uint8_t, kImageBytes> bytes{};

  std::uint8_t& at(int row, int col, int channel) {
    return bytes[(row * kImageWidth + col) * 3 + channel];
  }
  std::uint8_t at(int row, int col, int channel) const {
    return bytes[(row * kImageWidth + col) * 3 + channel];
  }
  bool operator==(const ImageState&) const = default;
};

struct Color {
  std::uint8_t r, g, b;
  bool operator==(const Color&) const = default;
};

inline constexpr Color kWallColor{0, 0, 255};
inline constexpr Color kExitColor{0, 255, 0};
inline constexpr Color kObstacleColor{255, 0, 0};
inline constexpr Color kFloorColor{128, 128, 128};
inline constexpr Color kSkyColor{255, 255, 255};

/// Stereographic wide-angle lens: a point (u, v) on the normalized image
/// plane maps to the ray at off-axis angle 2*atan(sqrt(u^2+v^2)), so u = ±1
/// at v = 0 gives the 180-degree horizontal field of view. The vertical
/// half-extent keeps angular pixels square at 7/20 of the horizontal range.
struct LensModel {
  double camera_height = 0.15;
  double vertical_half_extent = 0.35;
};

/// Ray direction in the camera frame for an image-plane point. Components
/// are (forward, right, up); the optical axis is (1, 0, 0).
Vec3 ray_from_plane(double u, double v_up);

/// Image-plane coordinates of a pixel center. Row 0 is the top of the image.
void pixel_plane_coords(int col, int row, const LensModel& lens, double& u, double& v_up);

/// Camera-frame ray through a pixel center.
Vec3 pixel_to_ray(int col, int row, const LensModel& lens = {});

/// Renders the agent's observation by per-pixel raycasting against walls,
/// exit, obstacles and floor. Pure function of the world state; identical
/// states render identical bytes. Throws std::invalid_argument if the agent
/// is outside the room beyond the exit passage.
ImageState render(const WorldState& world, const LensModel& lens = {});

/// Writes a binary P6 portable pixmap. `scale` replicates each pixel into a
/// scale x scale block for human inspection.
void write_ppm(std::ostream& out, const ImageState& image, int scale = 1);

}  // namespace evac
