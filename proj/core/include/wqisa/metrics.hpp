#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "wqisa/point_cloud.hpp"
#include "wqisa/spline_surface.hpp"

namespace wqisa {

/// Statistics of absolute punctual errors |z - f(x, y)|.
/// `mse` is the mean of squared residuals; `std` uses the population formula.
struct ErrorStats {
  double mean = 0.0;
  double std = 0.0;
  double mse = 0.0;
  double max_abs = 0.0;
  std::size_t count = 0;
};

/// Statistics of the given signed residuals. Throws InvalidArgument when empty.
ErrorStats error_stats(std::span<const double> residuals);

/// Residuals z - f(x, y) over the cloud. Propagates OutOfDomain.
std::vector<double> residuals(const std::function<double(double, double)>& f, std::span<const Point3> cloud);

ErrorStats punctual_errors(const SplineSurface& surface, std::span<const Point3> cloud);

/// Mean squared error of `surface` over `validation` (GMSE when the cloud is the validation set).
double gmse(const SplineSurface& surface, std::span<const Point3> validation);

/// Per-element local MSE over the nonempty spans of a space. Element (a, b) is the
/// a-th nonempty x span and the b-th nonempty y span; elements that no point
/// projects into carry 0.
struct ElementErrorMap {
  std::vector<std::size_t> spans_x;
  std::vector<std::size_t> spans_y;
  Grid lmse;
  /// Number of points that landed in each element.
  std::vector<std::size_t> counts;

  std::size_t count(std::size_t a, std::size_t b) const { return counts[a * spans_y.size() + b]; }
};

/// LMSE of `surface` on the elements of `space` (usually the surface's own space).
/// Throws OutOfDomain for a validation point outside the space.
ElementErrorMap lmse(const SplineSurface& surface, std::span<const Point3> validation, const TensorSplineSpace& space);


/// Two-sided Hausdorff distance between finite point sets of R^3.
/// Throws InvalidArgument when either set is empty.
double hausdorff(std::span<const Point3> a, std::span<const Point3> b);

/// sup over a of the distance to the nearest point of b.
double directed_hausdorff(std::span<const Point3> a, std::span<const Point3> b);

/// Samples of the surface image on a uniform (nx x ny) grid over its domain.
PointCloud sample_surface(const std::function<double(double, double)>& f, const Box2& domain, std::size_t nx,
                          std::size_t ny);

/// Dense sample of a spline surface for Hausdorff distances: a uniform grid with
/// density * (elements along the axis) + 1 samples per axis.
PointCloud surface_point_set(const SplineSurface& surface, std::size_t density = 4);

/// Max absolute entrywise difference. Throws InvalidArgument on a shape mismatch.
double linf_gridded(const Grid& a, const Grid& b);

}  // namespace wqisa
