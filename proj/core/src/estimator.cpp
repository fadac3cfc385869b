#include "wqisa/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "wqisa/errors.hpp"

namespace wqisa {
namespace {

struct Weighted {
  std::size_t id;
  double w;
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Summation runs in ascending id order so results do not depend on index layout.
Estimate quotient(const PointCloud& cloud, const std::vector<Weighted>& items) {
  double num = 0.0;
  double den = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (const auto& it : items) {
    const double z = cloud[it.id].z;
    num += z * it.w;
    den += it.w;
    if (first) {
      lo = hi = z;
      first = false;
    } else {
      lo = std::min(lo, z);
      hi = std::max(hi, z);
    }
  }
  if (items.empty() || !(den > 0.0)) throw ZeroWeight("control point estimator: total weight is zero");
  return Estimate{std::clamp(num / den, lo, hi), items.size(), 0, false};
}

std::vector<Weighted> coincident_or(const PlanarIndex& index, double u, double v, double tol) {
  std::vector<Weighted> out;
  const auto ids = index.within_radius(u, v, tol);
  const double share = ids.empty() ? 0.0 : 1.0 / static_cast<double>(ids.size());
  for (auto id : ids) out.push_back({id, share});
  return out;
}

}  // namespace

ControlPointEstimator::ControlPointEstimator(PointCloud cloud)
    : cloud_(std::move(cloud)), index_(cloud_), default_tolerance_(default_coincidence_tolerance(cloud_)) {}

Estimate ControlPointEstimator::estimate(double u, double v, const WeightSpec& spec) const {
  spec.validate();
  std::vector<Weighted> items;

  std::visit(Overloaded{
                 [&](const IndicatorWeight& w) {
                   for (auto id : index_.within_radius(u, v, w.radius)) items.push_back({id, 1.0});
                 },
                 [&](const GaussianWeight& w) {
                   for (std::size_t id = 0; id < cloud_.size(); ++id) {
                     const double g = weight_gaussian(cloud_[id].x, cloud_[id].y, u, v, w.sigma, w.squared_norm);
                     if (g > 0.0) items.push_back({id, g});
                   }
                 },
                 [&](const KnnWeight& w) {
                   if (w.k > cloud_.size())
                     throw InvalidArgument("knn weight: k = " + std::to_string(w.k) + " exceeds cloud size " +
                                           std::to_string(cloud_.size()));
                   const double share = 1.0 / static_cast<double>(w.k);
                   for (const auto& nb : index_.knn(u, v, w.k)) items.push_back({nb.id, share});
                 },
                 [&](const IdwWeight& w) {
                   const double tol = w.coincidence_tolerance.value_or(default_tolerance_);
                   items = coincident_or(index_, u, v, tol);
                   if (!items.empty()) return;
                   for (std::size_t id = 0; id < cloud_.size(); ++id) {
                     const double dx = cloud_[id].x - u;
                     const double dy = cloud_[id].y - v;
                     items.push_back({id, 1.0 / std::sqrt(dx * dx + dy * dy)});
                   }
                 },
                 [&](const TruncatedIdwWeight& w) {
                   const double tol = w.coincidence_tolerance.value_or(default_tolerance_);
                   items = coincident_or(index_, u, v, tol);
                   if (!items.empty()) return;
                   const std::size_t k = std::min(w.neighbors, cloud_.size());
                   for (const auto& nb : index_.knn(u, v, k)) {
                     const double dx = cloud_[nb.id].x - u;
                     const double dy = cloud_[nb.id].y - v;
                     items.push_back({nb.id, 1.0 / std::sqrt(dx * dx + dy * dy)});
                   }
                 },
             },
             spec.kernel);

  std::sort(items.begin(), items.end(), [](const Weighted& a, const Weighted& b) { return a.id < b.id; });
  std::erase_if(items, [](const Weighted& it) { return !(it.w > 0.0); });
  if (items.empty()) throw ZeroWeight("control point estimator: no point has positive weight");

  if (!spec.filter.enabled) return quotient(cloud_, items);

  std::vector<double> zs;
  zs.reserve(items.size());
  for (const auto& it : items) zs.push_back(cloud_[it.id].z);
  const auto q = quartiles(std::move(zs));
  const double iqr = q.q3 - q.q1;
  const double lo = q.q1 - spec.filter.fence * iqr;
  const double hi = q.q3 + spec.filter.fence * iqr;
  std::vector<Weighted> kept;
  kept.reserve(items.size());
  for (const auto& it : items) {
    const double z = cloud_[it.id].z;
    if (z >= lo && z <= hi) kept.push_back(it);
  }
  if (kept.empty()) {
    Estimate e = quotient(cloud_, items);
    e.filter_fallback = true;
    return e;
  }
  Estimate e = quotient(cloud_, kept);
  e.rejected = items.size() - kept.size();
  return e;
}

Grid ControlPointEstimator::estimate_grid(const TensorSplineSpace& space, const WeightSpec& spec,
                                          unsigned threads) const {
  spec.validate();
  const auto ax = space.knots_x().knot_averages();
  const auto ay = space.knots_y().knot_averages();
  Grid grid(ax.size(), ay.size());

  auto fill_rows = [&](std::size_t row_begin, std::size_t row_end) {
    for (std::size_t i = row_begin; i < row_end; ++i) {
      for (std::size_t j = 0; j < ay.size(); ++j) {
        try {
          grid(i, j) = estimate(ax[i], ay[j], spec).value;
        } catch (const ZeroWeight&) {
          throw ZeroWeight(i, j,
                           "control point estimator: zero total weight at coefficient (" + std::to_string(i) + ", " +
                               std::to_string(j) + ") centred at (" + std::to_string(ax[i]) + ", " +
                               std::to_string(ay[j]) + ")");
        }
      }
    }
  };

  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), ax.size());
  if (workers <= 1) {
    fill_rows(0, ax.size());
    return grid;
  }

  // Rows are partitioned statically; the lowest failing row's error is reported,
  // matching what a sequential sweep would raise first.
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (ax.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t b = w * chunk;
      const std::size_t e = std::min(ax.size(), b + chunk);
      pool.emplace_back([&, w, b, e] {
        try {
          fill_rows(b, e);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
  return grid;
}

double estimate_control_point(std::span<const Point3> cloud, double u, double v, const WeightSpec& spec) {
  return ControlPointEstimator(PointCloud(cloud.begin(), cloud.end())).estimate(u, v, spec).value;
}

SplineSurface estimate_all_coefficients(std::span<const Point3> cloud, const TensorSplineSpace& space,
                                        const WeightSpec& spec, unsigned threads) {
  if (cloud.empty()) throw InvalidArgument("estimate_all_coefficients: empty cloud");
  ControlPointEstimator est(PointCloud(cloud.begin(), cloud.end()));
  return SplineSurface(space, est.estimate_grid(space, spec, threads));
}

}  // namespace wqisa
