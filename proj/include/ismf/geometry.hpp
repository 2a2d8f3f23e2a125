// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ISMF_GEOMETRY_HPP_
#define ISMF_GEOMETRY_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace ismf {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    double n = norm();
    return {x / n, y / n, z / n};
  }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

/// Cuboid room with one corner at the origin and axis-aligned walls.
struct Shoebox {
  Vec3 dims;  // Lx, Ly, Lz in meters

  double volume() const { return dims.x * dims.y * dims.z; }
  double surface_area() const {
    return 2.0 * (dims.x * dims.y + dims.x * dims.z + dims.y * dims.z);
  }
  bool strictly_inside(const Vec3& p) const {
    return p.x > 0 && p.x < dims.x && p.y > 0 && p.y < dims.y && p.z > 0 &&
           p.z < dims.z;
  }
};

// Surface index convention used everywhere: 0:x=0, 1:x=Lx, 2:y=0, 3:y=Ly,
// 4:z=0 (floor), 5:z=Lz (ceiling).
inline constexpr int kNumSurfaces = 6;

/// One mirrored source of the shoebox lattice. reflection_counts[s] is the
/// number of reflections off surface s along the unfolded path; their sum is
/// the image order.
struct ImageSource {
  Vec3 position;
  int order = 0;
  std::array<int, kNumSurfaces> reflection_counts{};
  // lattice coordinates (n, q) per axis; x = (1-2q)*s + 2nL
  std::array<int, 3> lattice_n{};
  std::array<int, 3> lattice_q{};
};

/// All image sources of order <= max_order, sorted by (order, lattice index).
/// Throws std::invalid_argument if the source is on or outside a wall or
/// max_order < 0.
std::vector<ImageSource> enumerate_images(const Shoebox& room,
                                          const Vec3& source, int max_order);

/// Distance and arrival direction (unit vector from ref_point toward the
/// image). Throws std::invalid_argument on coincident points.
std::pair<double, Vec3> image_geometry(const ImageSource& image,
                                       const Vec3& ref_point);

}  // namespace ismf

#endif  // ISMF_GEOMETRY_HPP_
