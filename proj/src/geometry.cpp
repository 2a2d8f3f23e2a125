// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ismf/geometry.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace ismf {

namespace {

struct AxisImage {
  double coord;
  int n, q;
  int count_lo;  // reflections off the wall at coordinate 0
  int count_hi;  // reflections off the wall at coordinate L
  int order() const { return count_lo + count_hi; }
};

// Mirror lattice along one axis: coord = (1-2q)*s + 2nL with q in {0,1}.
// The wall at 0 is hit |n-q| times and the wall at L is hit |n| times.
std::vector<AxisImage> axis_images(double s, double length, int max_order) {
  std::vector<AxisImage> out;
  for (int n = -(max_order + 1) / 2 - 1; n <= max_order / 2 + 1; ++n) {
    for (int q = 0; q <= 1; ++q) {
      AxisImage a;
      a.n = n;
      a.q = q;
      a.count_lo = std::abs(n - q);
      a.count_hi = std::abs(n);
      if (a.order() > max_order) continue;
      a.coord = (1 - 2 * q) * s + 2.0 * n * length;
      out.push_back(a);
    }
  }
  return out;
}

}  // namespace

std::vector<ImageSource> enumerate_images(const Shoebox& room,
                                          const Vec3& source, int max_order) {
  if (room.dims.x <= 0 || room.dims.y <= 0 || room.dims.z <= 0)
    throw std::invalid_argument("enumerate_images: room dimensions must be positive");
  if (!room.strictly_inside(source))
    throw std::invalid_argument("enumerate_images: source must be strictly inside the room");
  if (max_order < 0)
    throw std::invalid_argument("enumerate_images: max_order must be >= 0");

  auto xs = axis_images(source.x, room.dims.x, max_order);
  auto ys = axis_images(source.y, room.dims.y, max_order);
  auto zs = axis_images(source.z, room.dims.z, max_order);

  std::vector<ImageSource> images;
  for (const auto& ax : xs) {
    for (const auto& ay : ys) {
      int oxy = ax.order() + ay.order();
      if (oxy > max_order) continue;
      for (const auto& az : zs) {
        int o = oxy + az.order();
        if (o > max_order) continue;
        ImageSource img;
        img.position = {ax.coord, ay.coord, az.coord};
        img.order = o;
        img.reflection_counts = {ax.count_lo, ax.count_hi, ay.count_lo,
                                 ay.count_hi, az.count_lo, az.count_hi};
        img.lattice_n = {ax.n, ay.n, az.n};
        img.lattice_q = {ax.q, ay.q, az.q};
        images.push_back(img);
      }
    }
  }

  std::sort(images.begin(), images.end(),
            [](const ImageSource& a, const ImageSource& b) {
              auto key = [](const ImageSource& i) {
                return std::make_tuple(i.order, i.lattice_n[0], i.lattice_q[0],
                                       i.lattice_n[1], i.lattice_q[1],
                                       i.lattice_n[2], i.lattice_q[2]);
              };
              return key(a) < key(b);
            });
  return images;
}

std::pair<double, Vec3> image_geometry(const ImageSource& image,
                                       const Vec3& ref_point) {
  Vec3 d = image.position - ref_point;
  double r = d.norm();
  if (r <= 0.0 || !std::isfinite(r))
    throw std::invalid_argument("image_geometry: image coincides with reference point");
  return {r, d * (1.0 / r)};
}

}  // namespace ismf
