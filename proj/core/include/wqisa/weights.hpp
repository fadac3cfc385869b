#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wqisa/point_cloud.hpp"

namespace wqisa {

/// 1 inside the closed disc of the given radius around (u, v), 0 outside.
struct IndicatorWeight {
  double radius = 1.0;
  friend bool operator==(const IndicatorWeight&, const IndicatorWeight&) = default;
};

/// exp(-d / (2 sigma^2)) with d the Euclidean distance, or exp(-d^2 / (2 sigma^2))
/// when `squared_norm` is set.
struct GaussianWeight {
  double sigma = 1.0;
  bool squared_norm = false;
  friend bool operator==(const GaussianWeight&, const GaussianWeight&) = default;
};

/// 1/k on the k nearest projections, 0 elsewhere.
struct KnnWeight {
  std::size_t k = 1;
  friend bool operator==(const KnnWeight&, const KnnWeight&) = default;
};

/// 1/d, except when some cloud points lie within `coincidence_tolerance` of
/// (u, v): then those points share the weight equally and every other point
/// gets 0. An unset tolerance means 1e-12 times the cloud's bounding-box diagonal.
struct IdwWeight {
  std::optional<double> coincidence_tolerance;
  friend bool operator==(const IdwWeight&, const IdwWeight&) = default;
};

/// IDW restricted to the `neighbors` closest points.
struct TruncatedIdwWeight {
  std::size_t neighbors = 500;
  std::optional<double> coincidence_tolerance;
  friend bool operator==(const TruncatedIdwWeight&, const TruncatedIdwWeight&) = default;
};

/// Tukey-fence rejection of z outliers among the positively weighted points.
struct OutlierFilter {
  bool enabled = false;
  double fence = 1.5;
  friend bool operator==(const OutlierFilter&, const OutlierFilter&) = default;
};

enum class WeightKind { Indicator, Gaussian, Knn, Idw, TruncatedIdw };

using WeightKernel = std::variant<IndicatorWeight, GaussianWeight, KnnWeight, IdwWeight, TruncatedIdwWeight>;

struct WeightSpec {
  WeightKernel kernel = KnnWeight{};
  OutlierFilter filter{};

  static WeightSpec indicator(double radius) { return {IndicatorWeight{radius}, {}}; }
  static WeightSpec gaussian(double sigma, bool squared_norm = false) {
    return {GaussianWeight{sigma, squared_norm}, {}};
  }
  static WeightSpec knn(std::size_t k) { return {KnnWeight{k}, {}}; }
  static WeightSpec idw(std::optional<double> tolerance = std::nullopt) { return {IdwWeight{tolerance}, {}}; }
  static WeightSpec truncated_idw(std::size_t neighbors, std::optional<double> tolerance = std::nullopt) {
    return {TruncatedIdwWeight{neighbors, tolerance}, {}};
  }

  WeightSpec with_filter(double fence = 1.5) const {
    WeightSpec s = *this;
    s.filter = OutlierFilter{true, fence};
    return s;
  }

  WeightKind kind() const noexcept { return static_cast<WeightKind>(kernel.index()); }

  /// The tunable parameter of the kernel (r, sigma, k, K); nullopt for plain IDW.
  std::optional<double> parameter() const;
  /// Copy with the tunable parameter replaced. Throws InvalidArgument for plain IDW.
  WeightSpec with_parameter(double value) const;

  /// Throws InvalidArgument when a parameter is out of range.
  void validate() const;

  friend bool operator==(const WeightSpec&, const WeightSpec&) = default;
};

std::string to_string(WeightKind kind);
/// Accepts the names produced by to_string (case-sensitive). Throws InvalidArgument.
WeightKind weight_kind_from_string(const std::string& name);
/// Short human-readable form, e.g. "knn(k=3)".
std::string describe(const WeightSpec& spec);

double weight_indicator(double x, double y, double u, double v, double radius);
double weight_gaussian(double x, double y, double u, double v, double sigma, bool squared_norm = false);

/// Per-point k-NN weights for the query (u, v). Ties at the k-th distance go to
/// the earlier points. Throws InvalidArgument on an empty cloud or k out of range.
std::vector<double> weight_knn(double u, double v, std::span<const Point3> cloud, std::size_t k);

/// IDW weight of the cloud point (x, y) for the query (u, v); the cloud supplies the
/// coincidence set.
double weight_idw(double x, double y, double u, double v, std::span<const Point3> cloud, double tolerance);

/// Per-point IDW weights for the query (u, v).
std::vector<double> weight_idw_all(double u, double v, std::span<const Point3> cloud, double tolerance);

/// 1e-12 times the bounding-box diagonal (or 1e-12 for a degenerate box).
double default_coincidence_tolerance(std::span<const Point3> cloud);

/// First and third quartiles by linear interpolation of order statistics.
struct Quartiles {
  double q1;
  double q3;
};
Quartiles quartiles(std::vector<double> values);

}  // namespace wqisa
