#pragma once
// Slow, independent reference implementations used by the unit tests and the
// acceptance runner. Nothing here shares code with the library beyond the data types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "wqisa/point_cloud.hpp"
#include "wqisa/spline_surface.hpp"
#include "wqisa/weights.hpp"

namespace oracle {

using wqisa::Point3;

// Textbook Cox-de Boor recursion with 0/0 = 0. The right end of the domain is
// folded into the last nonempty span.
inline double cox_de_boor(const std::vector<double>& x, int p, std::size_t i, double t) {
  if (p == 0) {
    const double a = x[i];
    const double b = x[i + 1];
    if (a < b && a <= t && t < b) return 1.0;
    if (a < b && t == x.back() && b == x.back()) return 1.0;
    return 0.0;
  }
  double left = 0.0;
  double right = 0.0;
  const double d1 = x[i + p] - x[i];
  const double d2 = x[i + p + 1] - x[i + 1];
  if (d1 > 0) left = (t - x[i]) / d1 * cox_de_boor(x, p - 1, i, t);
  if (d2 > 0) right = (x[i + p + 1] - t) / d2 * cox_de_boor(x, p - 1, i + 1, t);
  return left + right;
}

inline std::vector<double> greville(const std::vector<double>& x, int p) {
  const std::size_t n = x.size() - p - 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (p == 0) {
      out[i] = 0.5 * (x[i] + x[i + 1]);
      continue;
    }
    double s = 0.0;
    for (int r = 1; r <= p; ++r) s += x[i + r];
    out[i] = s / p;
  }
  return out;
}

// Full double sum over every basis pair.
inline double spline_eval(const std::vector<double>& kx, int px, const std::vector<double>& ky, int py,
                          const wqisa::Grid& c, double x, double y) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.rows; ++i) {
    const double bx = cox_de_boor(kx, px, i, x);
    if (bx == 0.0) continue;
    for (std::size_t j = 0; j < c.cols; ++j) s += c(i, j) * bx * cox_de_boor(ky, py, j, y);
  }
  return s;
}

inline double spline_eval(const wqisa::SplineSurface& s, double x, double y) {
  const auto& sp = s.space();
  const auto kx = std::vector<double>(sp.knots_x().knots().begin(), sp.knots_x().knots().end());
  const auto ky = std::vector<double>(sp.knots_y().knots().begin(), sp.knots_y().knots().end());
  return spline_eval(kx, sp.knots_x().degree(), ky, sp.knots_y().degree(), s.coefficients(), x, y);
}

inline double d2(const Point3& p, double u, double v) { return (p.x - u) * (p.x - u) + (p.y - v) * (p.y - v); }

// Ids sorted by (squared planar distance, id), full sort.
inline std::vector<std::size_t> sorted_by_distance(std::span<const Point3> cloud, double u, double v) {
  std::vector<std::size_t> ids(cloud.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
    const double da = d2(cloud[a], u, v);
    const double db = d2(cloud[b], u, v);
    return da != db ? da < db : a < b;
  });
  return ids;
}

inline std::vector<std::size_t> knn(std::span<const Point3> cloud, double u, double v, std::size_t k) {
  auto ids = sorted_by_distance(cloud, u, v);
  ids.resize(k);
  return ids;
}

inline std::vector<std::size_t> within(std::span<const Point3> cloud, double u, double v, double r) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    if (d2(cloud[i], u, v) <= r * r) out.push_back(i);
  return out;
}

// Weight of every point for the query (u, v), straight from the definitions.
inline std::vector<double> weights(std::span<const Point3> cloud, double u, double v, const wqisa::WeightSpec& spec) {
  std::vector<double> w(cloud.size(), 0.0);
  auto diag = [&] {
    const auto b = wqisa::bounding_box(cloud);
    const double d = std::hypot(b.x_max - b.x_min, b.y_max - b.y_min);
    return d > 0 ? 1e-12 * d : 1e-12;
  };
  auto idw_on = [&](const std::vector<std::size_t>& ids, std::optional<double> tol_opt) {
    const double tol = tol_opt ? *tol_opt : diag();
    std::vector<std::size_t> coincident;
    for (std::size_t i = 0; i < cloud.size(); ++i)
      if (d2(cloud[i], u, v) <= tol * tol) coincident.push_back(i);
    if (!coincident.empty()) {
      for (auto i : coincident) w[i] = 1.0 / static_cast<double>(coincident.size());
      return;
    }
    for (auto i : ids) w[i] = 1.0 / std::sqrt(d2(cloud[i], u, v));
  };
  if (const auto* s = std::get_if<wqisa::IndicatorWeight>(&spec.kernel)) {
    for (std::size_t i = 0; i < cloud.size(); ++i) w[i] = d2(cloud[i], u, v) <= s->radius * s->radius ? 1.0 : 0.0;
  } else if (const auto* g = std::get_if<wqisa::GaussianWeight>(&spec.kernel)) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const double dd = g->squared_norm ? d2(cloud[i], u, v) : std::sqrt(d2(cloud[i], u, v));
      w[i] = std::exp(-dd / (2.0 * g->sigma * g->sigma));
    }
  } else if (const auto* k = std::get_if<wqisa::KnnWeight>(&spec.kernel)) {
    for (auto i : knn(cloud, u, v, k->k)) w[i] = 1.0 / static_cast<double>(k->k);
  } else if (const auto* d = std::get_if<wqisa::IdwWeight>(&spec.kernel)) {
    std::vector<std::size_t> all(cloud.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    idw_on(all, d->coincidence_tolerance);
  } else if (const auto* t = std::get_if<wqisa::TruncatedIdwWeight>(&spec.kernel)) {
    idw_on(knn(cloud, u, v, std::min(t->neighbors, cloud.size())), t->coincidence_tolerance);
  }
  return w;
}

// Type-7 sample quantile.
inline double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const double f = std::floor(h);
  const auto i = static_cast<std::size_t>(f);
  if (i + 1 >= v.size()) return v.back();
  return v[i] + (h - f) * (v[i + 1] - v[i]);
}

// Ids that enter the final quotient.
inline std::vector<std::size_t> contributors(std::span<const Point3> cloud, double u, double v,
                                             const wqisa::WeightSpec& spec) {
  const auto w = weights(cloud, u, v, spec);
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    if (w[i] > 0) ids.push_back(i);
  if (!spec.filter.enabled || ids.empty()) return ids;
  std::vector<double> zs;
  for (auto i : ids) zs.push_back(cloud[i].z);
  const double q1 = quantile(zs, 0.25);
  const double q3 = quantile(zs, 0.75);
  const double lo = q1 - spec.filter.fence * (q3 - q1);
  const double hi = q3 + spec.filter.fence * (q3 - q1);
  std::vector<std::size_t> kept;
  for (auto i : ids)
    if (cloud[i].z >= lo && cloud[i].z <= hi) kept.push_back(i);
  return kept.empty() ? ids : kept;
}

// Quotient sum(z w) / sum(w) over the contributors; nullopt on zero mass.
inline std::optional<double> estimate(std::span<const Point3> cloud, double u, double v,
                                      const wqisa::WeightSpec& spec) {
  const auto w = weights(cloud, u, v, spec);
  double num = 0.0;
  double den = 0.0;
  for (auto i : contributors(cloud, u, v, spec)) {
    num += cloud[i].z * w[i];
    den += w[i];
  }
  if (!(den > 0)) return std::nullopt;
  return num / den;
}

inline double distance3(const Point3& a, const Point3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

inline double directed_hausdorff(std::span<const Point3> a, std::span<const Point3> b) {
  double worst = 0.0;
  for (const auto& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : b) best = std::min(best, distance3(p, q));
    worst = std::max(worst, best);
  }
  return worst;
}

inline double hausdorff(std::span<const Point3> a, std::span<const Point3> b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

inline wqisa::PointCloud random_cloud(std::mt19937_64& rng, std::size_t n, const wqisa::Box2& box, double zlo = -1.0,
                                      double zhi = 1.0) {
  std::uniform_real_distribution<double> ux(box.x_min, box.x_max);
  std::uniform_real_distribution<double> uy(box.y_min, box.y_max);
  std::uniform_real_distribution<double> uz(zlo, zhi);
  wqisa::PointCloud c(n);
  for (auto& p : c) {
    p.x = ux(rng);
    p.y = uy(rng);
    p.z = uz(rng);
  }
  return c;
}

}  // namespace oracle
