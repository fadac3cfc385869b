#include "wqisa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "wqisa/errors.hpp"

namespace wqisa {

ErrorStats error_stats(std::span<const double> residuals) {
  if (residuals.empty()) throw InvalidArgument("error_stats: no residuals");
  const auto n = static_cast<double>(residuals.size());
  ErrorStats s;
  s.count = residuals.size();
  double sum_abs = 0.0;
  double sum_sq = 0.0;
  for (double r : residuals) {
    const double a = std::fabs(r);
    sum_abs += a;
    sum_sq += r * r;
    s.max_abs = std::max(s.max_abs, a);
  }
  s.mean = sum_abs / n;
  s.mse = sum_sq / n;
  double dev = 0.0;
  for (double r : residuals) {
    const double d = std::fabs(r) - s.mean;
    dev += d * d;
  }
  s.std = std::sqrt(dev / n);
  return s;
}

std::vector<double> residuals(const std::function<double(double, double)>& f, std::span<const Point3> cloud) {
  std::vector<double> r;
  r.reserve(cloud.size());
  for (const auto& p : cloud) r.push_back(p.z - f(p.x, p.y));
  return r;
}

ErrorStats punctual_errors(const SplineSurface& surface, std::span<const Point3> cloud) {
  return error_stats(residuals([&](double x, double y) { return surface.evaluate(x, y); }, cloud));
}

double gmse(const SplineSurface& surface, std::span<const Point3> validation) {
  if (validation.empty()) throw InvalidArgument("gmse: empty validation cloud");
  double sse = 0.0;
  for (const auto& p : validation) {
    const double r = p.z - surface.evaluate(p.x, p.y);
    sse += r * r;
  }
  return sse / static_cast<double>(validation.size());
}

ElementErrorMap lmse(const SplineSurface& surface, std::span<const Point3> validation,
                     const TensorSplineSpace& space) {
  ElementErrorMap map;
  map.spans_x = space.knots_x().nonempty_spans();
  map.spans_y = space.knots_y().nonempty_spans();
  const std::size_t ex = map.spans_x.size();
  const std::size_t ey = map.spans_y.size();
  map.lmse = Grid(ex, ey);
  map.counts.assign(ex * ey, 0);

  for (const auto& p : validation) {
    const auto [mu, nu] = space.element_of(p.x, p.y);
    const auto a = static_cast<std::size_t>(std::lower_bound(map.spans_x.begin(), map.spans_x.end(), mu) -
                                            map.spans_x.begin());
    const auto b = static_cast<std::size_t>(std::lower_bound(map.spans_y.begin(), map.spans_y.end(), nu) -
                                            map.spans_y.begin());
    const double r = p.z - surface.evaluate(p.x, p.y);
    map.lmse(a, b) += r * r;
    ++map.counts[a * ey + b];
  }
  for (std::size_t k = 0; k < map.counts.size(); ++k)
    if (map.counts[k] > 0) map.lmse.values[k] /= static_cast<double>(map.counts[k]);
  return map;
}

double directed_hausdorff(std::span<const Point3> a, std::span<const Point3> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("hausdorff: empty point set");
  // Early-break scan: once some b is closer than the running maximum, the current a
  // cannot raise the maximum. Visiting b in a fixed pseudo-random order makes the
  // break fire early on structured inputs. The result is exact.
  std::vector<std::size_t> order(b.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(0x5eed);
  std::shuffle(order.begin(), order.end(), rng);

  double cmax2 = 0.0;
  for (const auto& p : a) {
    double cmin2 = std::numeric_limits<double>::infinity();
    bool dominated = false;
    for (auto j : order) {
      const double dx = p.x - b[j].x;
      const double dy = p.y - b[j].y;
      const double dz = p.z - b[j].z;
      const double d2 = dx * dx + dy * dy + dz * dz;
      if (d2 < cmax2) {
        dominated = true;
        break;
      }
      cmin2 = std::min(cmin2, d2);
    }
    if (!dominated) cmax2 = std::max(cmax2, cmin2);
  }
  return std::sqrt(cmax2);
}

double hausdorff(std::span<const Point3> a, std::span<const Point3> b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

PointCloud sample_surface(const std::function<double(double, double)>& f, const Box2& domain, std::size_t nx,
                          std::size_t ny) {
  if (nx < 2 || ny < 2) throw InvalidArgument("sample_surface: need at least 2 samples per axis");
  PointCloud out;
  out.reserve(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    const double y = j + 1 == ny ? domain.y_max
                                 : domain.y_min + domain.height() * static_cast<double>(j) / static_cast<double>(ny - 1);
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = i + 1 == nx
                           ? domain.x_max
                           : domain.x_min + domain.width() * static_cast<double>(i) / static_cast<double>(nx - 1);
      out.push_back(Point3{x, y, f(x, y)});
    }
  }
  return out;
}

PointCloud surface_point_set(const SplineSurface& surface, std::size_t density) {
  if (density < 1) throw InvalidArgument("surface_point_set: density must be >= 1");
  const auto& space = surface.space();
  const Box2 d = space.domain();
  const std::size_t nx = density * space.knots_x().element_count() + 1;
  const std::size_t ny = density * space.knots_y().element_count() + 1;
  return sample_surface([&](double x, double y) { return surface.evaluate(x, y); }, d, nx, ny);
}

double linf_gridded(const Grid& a, const Grid& b) {
  if (a.rows != b.rows || a.cols != b.cols || a.values.size() != b.values.size())
    throw InvalidArgument("linf_gridded: grid shapes differ (" + std::to_string(a.rows) + "x" +
                          std::to_string(a.cols) + " vs " + std::to_string(b.rows) + "x" + std::to_string(b.cols) + ")");
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::fabs(a.values[i] - b.values[i]));
  return m;
}

}  // namespace wqisa
