#pragma once

#include <span>
#include <vector>

namespace wqisa {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

/// Unordered samples of a height field. Order is still significant: k-NN ties
/// are broken by position in the cloud.
using PointCloud = std::vector<Point3>;

struct Box2 {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  double width() const noexcept { return x_max - x_min; }
  double height() const noexcept { return y_max - y_min; }
  double diagonal() const noexcept;
  bool contains(double x, double y) const noexcept {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
};

struct Range {
  double min = 0.0;
  double max = 0.0;
};

/// Bounding box of the (x, y) projections. Throws InvalidArgument on an empty cloud.
Box2 bounding_box(std::span<const Point3> cloud);

/// Range of z values. Throws InvalidArgument on an empty cloud.
Range z_range(std::span<const Point3> cloud);

/// Population variance of z (0 for a single point).
double z_variance(std::span<const Point3> cloud);

}  // namespace wqisa
