#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wqisa/point_cloud.hpp"

namespace wqisa {

struct Neighbor {
  std::size_t id = 0;
  double distance = 0.0;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Optional instrumentation for a single query.
struct QueryStats {
  std::uint64_t visited_nodes = 0;
};

/// Static 2-d tree over the (x, y) projections of a cloud. Point ids are input
/// positions. Median splits on alternating axes; immutable after construction,
/// so concurrent queries are safe.
///
/// All queries are exact. Distance ties are ordered by id, which makes the k-NN
/// set unique: among equidistant candidates at the k-th place the lower ids win.
class PlanarIndex {
public:
  /// Throws InvalidArgument on an empty or non-finite input.
  explicit PlanarIndex(std::span<const Point3> points);

  std::size_t size() const noexcept { return nodes_.size(); }
  /// Depth of the deepest node, 0 for a single point.
  std::size_t depth() const noexcept { return depth_; }

  /// The k nearest points to (u, v), ascending by (distance, id).
  /// Throws InvalidArgument unless 1 <= k <= size().
  std::vector<Neighbor> knn(double u, double v, std::size_t k, QueryStats* stats = nullptr) const;

  /// Ids of every point with distance <= r, ascending by id.
  std::vector<std::size_t> within_radius(double u, double v, double r, QueryStats* stats = nullptr) const;

private:
  struct Node {
    double x;
    double y;
    std::size_t id;
  };

  void build(std::size_t lo, std::size_t hi, int axis, std::size_t level);

  // Nodes laid out as an implicit tree: the root of [lo, hi) sits at the midpoint.
  std::vector<Node> nodes_;
  std::size_t depth_ = 0;
};

}  // namespace wqisa
