#include "wqisa/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "wqisa/errors.hpp"

namespace wqisa {

double hemisphere(double x, double y) {
  const double radicand = 64.0 - 81.0 * ((x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5));
  if (radicand < 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(radicand) / (9.0 - 0.5);
}

PointCloud hemisphere_cloud(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("hemisphere_cloud: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PointCloud out;
  out.reserve(n);
  while (out.size() < n) {
    const double x = unit(rng);
    const double y = unit(rng);
    const double z = hemisphere(x, y);
    if (std::isnan(z)) continue;
    out.push_back(Point3{x, y, z});
  }
  return out;
}

PointCloud sample_function(const std::function<double(double, double)>& f, const Box2& box, std::size_t n,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.x_min, box.x_max);
  std::uniform_real_distribution<double> uy(box.y_min, box.y_max);
  PointCloud out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    out.push_back(Point3{x, y, f(x, y)});
  }
  return out;
}

PointCloud lattice_cloud(const std::function<double(double, double)>& f, const Box2& box, std::size_t nx,
                         std::size_t ny) {
  if (nx < 2 || ny < 2) throw InvalidArgument("lattice_cloud: need at least 2 samples per axis");
  PointCloud out;
  out.reserve(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    const double y = j + 1 == ny ? box.y_max : box.y_min + box.height() * static_cast<double>(j) / static_cast<double>(ny - 1);
    for (std::size_t i = 0; i < nx; ++i) {
      const double x =
          i + 1 == nx ? box.x_max : box.x_min + box.width() * static_cast<double>(i) / static_cast<double>(nx - 1);
      out.push_back(Point3{x, y, f(x, y)});
    }
  }
  return out;
}

PointCloud perturb(std::span<const Point3> cloud, const Perturbation& p, std::uint64_t seed) {
  if (!(p.outlier_fraction >= 0.0 && p.outlier_fraction <= 1.0))
    throw InvalidArgument("perturb: outlier fraction must lie in [0, 1]");
  if (!(p.noise_std >= 0.0) || !(p.outlier_scale >= 0.0))
    throw InvalidArgument("perturb: noise and outlier scale must be >= 0");
  PointCloud out(cloud.begin(), cloud.end());
  if (out.empty()) return out;

  std::mt19937_64 noise_rng(seed);
  if (p.noise_std > 0.0) {
    std::normal_distribution<double> noise(0.0, p.noise_std);
    for (auto& q : out) q.z += noise(noise_rng);
  }

  const auto count = static_cast<std::size_t>(std::llround(p.outlier_fraction * static_cast<double>(out.size())));
  if (count == 0) return out;
  const Range r = z_range(cloud);
  const double centre = 0.5 * (r.min + r.max);
  const double extent = r.max > r.min ? r.max - r.min : 1.0;
  const double half = 0.5 * p.outlier_scale * extent;

  std::mt19937_64 outlier_rng(seed ^ 0xa5a5a5a5a5a5a5a5ULL);
  std::vector<std::size_t> ids(out.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  std::shuffle(ids.begin(), ids.end(), outlier_rng);
  std::uniform_real_distribution<double> draw(centre - half, centre + half);
  for (std::size_t i = 0; i < count; ++i) out[ids[i]].z = half > 0.0 ? draw(outlier_rng) : centre;
  return out;
}

}  // namespace wqisa
