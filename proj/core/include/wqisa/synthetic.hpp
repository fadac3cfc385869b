#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "wqisa/point_cloud.hpp"

namespace wqisa {

/// z = sqrt(64 - 81((x-0.5)^2 + (y-0.5)^2)) / (9 - 0.5), the timing benchmark surface.
/// NaN where the radicand is negative.
double hemisphere(double x, double y);

/// n points with (x, y) uniform on the part of [0,1]^2 where the radicand is
/// nonnegative and exact z. Throws InvalidArgument for n == 0.
PointCloud hemisphere_cloud(std::size_t n, std::uint64_t seed);

/// n points with (x, y) uniform on `box` and z = f(x, y).
PointCloud sample_function(const std::function<double(double, double)>& f, const Box2& box, std::size_t n,
                           std::uint64_t seed);

/// nx by ny lattice over `box` (row by row in y), z = f(x, y).
PointCloud lattice_cloud(const std::function<double(double, double)>& f, const Box2& box, std::size_t nx,
                         std::size_t ny);

struct Perturbation {
  double noise_std = 0.0;
  /// Fraction of points whose z is replaced by an outlier.
  double outlier_fraction = 0.0;
  /// Outliers are uniform on the z range widened by this factor about its centre.
  double outlier_scale = 1.0;
};

/// Adds N(0, noise_std^2) to every z, then replaces round(fraction * n) randomly
/// chosen z values by outliers. Deterministic per seed. Throws InvalidArgument when
/// fraction is outside [0, 1] or a magnitude is negative.
PointCloud perturb(std::span<const Point3> cloud, const Perturbation& perturbation, std::uint64_t seed);

}  // namespace wqisa
