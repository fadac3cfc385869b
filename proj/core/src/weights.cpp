#include "wqisa/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wqisa/errors.hpp"

namespace wqisa {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double squared_distance(double x, double y, double u, double v) {
  const double dx = x - u;
  const double dy = y - v;
  return dx * dx + dy * dy;
}

void check_tolerance(const std::optional<double>& tol) {
  if (tol && !(*tol >= 0.0 && std::isfinite(*tol)))
    throw InvalidArgument("weight: coincidence tolerance must be finite and >= 0");
}

}  // namespace

std::optional<double> WeightSpec::parameter() const {
  return std::visit(Overloaded{
                        [](const IndicatorWeight& w) -> std::optional<double> { return w.radius; },
                        [](const GaussianWeight& w) -> std::optional<double> { return w.sigma; },
                        [](const KnnWeight& w) -> std::optional<double> { return static_cast<double>(w.k); },
                        [](const IdwWeight&) -> std::optional<double> { return std::nullopt; },
                        [](const TruncatedIdwWeight& w) -> std::optional<double> {
                          return static_cast<double>(w.neighbors);
                        },
                    },
                    kernel);
}

WeightSpec WeightSpec::with_parameter(double value) const {
  WeightSpec out = *this;
  auto as_count = [](double v) {
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e15)
      throw InvalidArgument("weight: count parameter must be a positive integer, got " + std::to_string(v));
    return static_cast<std::size_t>(v);
  };
  std::visit(Overloaded{
                 [&](IndicatorWeight& w) { w.radius = value; },
                 [&](GaussianWeight& w) { w.sigma = value; },
                 [&](KnnWeight& w) { w.k = as_count(value); },
                 [](IdwWeight&) { throw InvalidArgument("weight: plain IDW has no tunable parameter"); },
                 [&](TruncatedIdwWeight& w) { w.neighbors = as_count(value); },
             },
             out.kernel);
  return out;
}

void WeightSpec::validate() const {
  std::visit(Overloaded{
                 [](const IndicatorWeight& w) {
                   if (!(w.radius > 0.0) || !std::isfinite(w.radius))
                     throw InvalidArgument("indicator weight: radius must be > 0");
                 },
                 [](const GaussianWeight& w) {
                   if (!(w.sigma > 0.0) || !std::isfinite(w.sigma))
                     throw InvalidArgument("gaussian weight: sigma must be > 0");
                 },
                 [](const KnnWeight& w) {
                   if (w.k < 1) throw InvalidArgument("knn weight: k must be >= 1");
                 },
                 [](const IdwWeight& w) { check_tolerance(w.coincidence_tolerance); },
                 [](const TruncatedIdwWeight& w) {
                   if (w.neighbors < 1) throw InvalidArgument("truncated idw weight: K must be >= 1");
                   check_tolerance(w.coincidence_tolerance);
                 },
             },
             kernel);
  if (filter.enabled && !(filter.fence >= 0.0 && std::isfinite(filter.fence)))
    throw InvalidArgument("outlier filter: fence multiplier must be finite and >= 0");
}

std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::Indicator: return "indicator";
    case WeightKind::Gaussian: return "gaussian";
    case WeightKind::Knn: return "knn";
    case WeightKind::Idw: return "idw";
    case WeightKind::TruncatedIdw: return "truncated_idw";
  }
  return "unknown";
}

WeightKind weight_kind_from_string(const std::string& name) {
  for (auto kind : {WeightKind::Indicator, WeightKind::Gaussian, WeightKind::Knn, WeightKind::Idw,
                    WeightKind::TruncatedIdw})
    if (to_string(kind) == name) return kind;
  throw InvalidArgument("unknown weight kind '" + name + "'");
}

std::string describe(const WeightSpec& spec) {
  std::string s = std::visit(
      Overloaded{
          [](const IndicatorWeight& w) { return "indicator(r=" + std::to_string(w.radius) + ")"; },
          [](const GaussianWeight& w) {
            return std::string(w.squared_norm ? "gaussian2" : "gaussian") + "(sigma=" + std::to_string(w.sigma) +
                   ")";
          },
          [](const KnnWeight& w) { return "knn(k=" + std::to_string(w.k) + ")"; },
          [](const IdwWeight&) { return std::string("idw"); },
          [](const TruncatedIdwWeight& w) { return "truncated_idw(K=" + std::to_string(w.neighbors) + ")"; },
      },
      spec.kernel);
  if (spec.filter.enabled) s += "+quartile_filter";
  return s;
}

double weight_indicator(double x, double y, double u, double v, double radius) {
  return squared_distance(x, y, u, v) <= radius * radius ? 1.0 : 0.0;
}

double weight_gaussian(double x, double y, double u, double v, double sigma, bool squared_norm) {
  const double d2 = squared_distance(x, y, u, v);
  const double d = squared_norm ? d2 : std::sqrt(d2);
  return std::exp(-d / (2.0 * sigma * sigma));
}

std::vector<double> weight_knn(double u, double v, std::span<const Point3> cloud, std::size_t k) {
  if (cloud.empty()) throw InvalidArgument("knn weight: empty cloud");
  if (k < 1 || k > cloud.size())
    throw InvalidArgument("knn weight: k = " + std::to_string(k) + " outside [1, " + std::to_string(cloud.size()) +
                          "]");
  std::vector<std::size_t> order(cloud.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> d2(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) d2[i] = squared_distance(cloud[i].x, cloud[i].y, u, v);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) { return d2[a] < d2[b] || (d2[a] == d2[b] && a < b); });
  std::vector<double> w(cloud.size(), 0.0);
  const double share = 1.0 / static_cast<double>(k);
  for (std::size_t i = 0; i < k; ++i) w[order[i]] = share;
  return w;
}

double weight_idw(double x, double y, double u, double v, std::span<const Point3> cloud, double tolerance) {
  const double tol2 = tolerance * tolerance;
  std::size_t coincident = 0;
  for (const auto& p : cloud)
    if (squared_distance(p.x, p.y, u, v) <= tol2) ++coincident;
  const double d2 = squared_distance(x, y, u, v);
  if (coincident == 0) return 1.0 / std::sqrt(d2);
  return d2 <= tol2 ? 1.0 / static_cast<double>(coincident) : 0.0;
}

std::vector<double> weight_idw_all(double u, double v, std::span<const Point3> cloud, double tolerance) {
  const double tol2 = tolerance * tolerance;
  std::vector<double> w(cloud.size(), 0.0);
  std::size_t coincident = 0;
  for (const auto& p : cloud)
    if (squared_distance(p.x, p.y, u, v) <= tol2) ++coincident;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double d2 = squared_distance(cloud[i].x, cloud[i].y, u, v);
    if (coincident == 0)
      w[i] = 1.0 / std::sqrt(d2);
    else if (d2 <= tol2)
      w[i] = 1.0 / static_cast<double>(coincident);
  }
  return w;
}

double default_coincidence_tolerance(std::span<const Point3> cloud) {
  const double diag = cloud.empty() ? 0.0 : bounding_box(cloud).diagonal();
  return 1e-12 * (diag > 0.0 ? diag : 1.0);
}

Quartiles quartiles(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("quartiles: empty input");
  std::sort(values.begin(), values.end());
  auto at = [&](double q) {
    const double h = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return Quartiles{at(0.25), at(0.75)};
}

}  // namespace wqisa
