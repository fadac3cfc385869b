#pragma once

#include <cstddef>
#include <span>

#include "wqisa/kd_tree.hpp"
#include "wqisa/point_cloud.hpp"
#include "wqisa/spline_surface.hpp"
#include "wqisa/weights.hpp"

namespace wqisa {

struct Estimate {
  double value = 0.0;
  /// Points that entered the final quotient.
  std::size_t contributors = 0;
  /// Points removed by the outlier filter.
  std::size_t rejected = 0;
  /// The filter would have removed everything, so the unfiltered quotient was used.
  bool filter_fallback = false;
};

/// Control point estimator over a fixed cloud: sum(z w) / sum(w) with w centred at
/// (u, v). Owns a copy of the cloud and a planar index over it.
class ControlPointEstimator {
public:
  /// Throws InvalidArgument on an empty cloud.
  explicit ControlPointEstimator(PointCloud cloud);

  const PointCloud& cloud() const noexcept { return cloud_; }
  const PlanarIndex& index() const noexcept { return index_; }

  /// The result always lies within [min z, max z] of the contributing points.
  /// Throws ZeroWeight when no point carries positive weight, InvalidArgument on
  /// an invalid spec (e.g. k larger than the cloud).
  Estimate estimate(double u, double v, const WeightSpec& spec) const;

  /// Estimates at every pair of knot averages. Grid entries are independent; with
  /// threads > 1 they are computed concurrently with the same result. ZeroWeight
  /// errors carry the offending (i, j).
  Grid estimate_grid(const TensorSplineSpace& space, const WeightSpec& spec, unsigned threads = 1) const;

private:
  PointCloud cloud_;
  PlanarIndex index_;
  double default_tolerance_;
};

/// One-off estimate; builds an index per call.
double estimate_control_point(std::span<const Point3> cloud, double u, double v, const WeightSpec& spec);

/// The wQISA of `cloud` over `space`.
SplineSurface estimate_all_coefficients(std::span<const Point3> cloud, const TensorSplineSpace& space,
                                        const WeightSpec& spec, unsigned threads = 1);

}  // namespace wqisa
