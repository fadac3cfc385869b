#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wqisa/point_cloud.hpp"
#include "wqisa/spline_surface.hpp"

namespace wqisa {

/// Multilevel B-spline approximation: level l lives on a uniform 2^l x 2^l mesh over
/// a common domain and the surface is the sum of all levels.
class MbaSurface {
public:
  /// Throws InvalidArgument when `levels` is empty or the levels disagree on the domain.
  explicit MbaSurface(std::vector<SplineSurface> levels);

  const std::vector<SplineSurface>& levels() const noexcept { return levels_; }
  std::size_t level_count() const noexcept { return levels_.size(); }
  Box2 domain() const noexcept { return levels_.front().space().domain(); }

  double evaluate(double x, double y) const;
  double operator()(double x, double y) const { return evaluate(x, y); }

  /// The first `count` levels.
  MbaSurface truncated(std::size_t count) const;

private:
  std::vector<SplineSurface> levels_;
};

/// Per-basis MBA coefficients over `space`: for every point, phi = B_k z / sum_l B_l^2;
/// then c_k = sum B_k^2 phi / sum B_k^2 over the points in the support of B_k, and
/// c_k = 0 where no point touches the support. Points outside the domain are ignored.
Grid mba_level_coefficients(std::span<const Point3> cloud, const TensorSplineSpace& space);

struct MbaLevelRecord {
  std::size_t level = 0;
  std::size_t elements_per_axis = 1;
  double training_rms = 0.0;
  /// NaN when no validation cloud was supplied.
  double validation_gmse = 0.0;
};

struct MbaFitResult {
  MbaSurface surface;
  /// One record per level that was computed, including the one that stopped the fit.
  std::vector<MbaLevelRecord> history;
  std::size_t best_level_count = 1;
};

struct MbaOptions {
  std::size_t max_levels = 10;
  int degree_x = 2;
  int degree_y = 2;
  /// Fitting domain; the bounding box of cloud and validation when unset.
  std::optional<Box2> domain;
};

/// Residual-correction MBA. Level 0 fits the cloud on a single element; each further
/// level fits z minus the running sum on a mesh with every element halved. Stops at
/// max_levels or when the validation GMSE rises, returning the surface truncated at
/// the best level. An empty validation cloud disables early stopping.
MbaFitResult fit_mba(std::span<const Point3> cloud, std::span<const Point3> validation, const MbaOptions& options);

}  // namespace wqisa
