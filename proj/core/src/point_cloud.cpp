#include "wqisa/point_cloud.hpp"

#include <algorithm>
#include <cmath>

#include "wqisa/errors.hpp"

namespace wqisa {

double Box2::diagonal() const noexcept { return std::hypot(width(), height()); }

Box2 bounding_box(std::span<const Point3> cloud) {
  if (cloud.empty()) throw InvalidArgument("bounding_box: empty point cloud");
  Box2 box{cloud[0].x, cloud[0].x, cloud[0].y, cloud[0].y};
  for (const auto& p : cloud) {
    box.x_min = std::min(box.x_min, p.x);
    box.x_max = std::max(box.x_max, p.x);
    box.y_min = std::min(box.y_min, p.y);
    box.y_max = std::max(box.y_max, p.y);
  }
  return box;
}

Range z_range(std::span<const Point3> cloud) {
  if (cloud.empty()) throw InvalidArgument("z_range: empty point cloud");
  Range r{cloud[0].z, cloud[0].z};
  for (const auto& p : cloud) {
    r.min = std::min(r.min, p.z);
    r.max = std::max(r.max, p.z);
  }
  return r;
}

double z_variance(std::span<const Point3> cloud) {
  if (cloud.empty()) throw InvalidArgument("z_variance: empty point cloud");
  double mean = 0.0;
  for (const auto& p : cloud) mean += p.z;
  mean /= static_cast<double>(cloud.size());
  double acc = 0.0;
  for (const auto& p : cloud) acc += (p.z - mean) * (p.z - mean);
  return acc / static_cast<double>(cloud.size());
}

}  // namespace wqisa
