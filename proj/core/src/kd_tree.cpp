#include "wqisa/kd_tree.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <utility>

#include "wqisa/errors.hpp"

namespace wqisa {
namespace {

struct Candidate {
  double dist2;
  std::size_t id;
  // Max-heap on (dist2, id): the top is the current worst of the k best.
  bool operator<(const Candidate& other) const noexcept {
    return dist2 < other.dist2 || (dist2 == other.dist2 && id < other.id);
  }
};

}  // namespace

PlanarIndex::PlanarIndex(std::span<const Point3> points) {
  if (points.empty()) throw InvalidArgument("planar index: empty input");
  nodes_.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y))
      throw InvalidArgument("planar index: non-finite coordinate at point " + std::to_string(i));
    nodes_.push_back(Node{points[i].x, points[i].y, i});
  }
  build(0, nodes_.size(), 0, 0);
}

void PlanarIndex::build(std::size_t lo, std::size_t hi, int axis, std::size_t level) {
  if (lo >= hi) return;
  depth_ = std::max(depth_, level);
  const std::size_t mid = lo + (hi - lo) / 2;
  auto first = nodes_.begin() + static_cast<std::ptrdiff_t>(lo);
  auto nth = nodes_.begin() + static_cast<std::ptrdiff_t>(mid);
  auto last = nodes_.begin() + static_cast<std::ptrdiff_t>(hi);
  if (axis == 0)
    std::nth_element(first, nth, last, [](const Node& a, const Node& b) { return a.x < b.x; });
  else
    std::nth_element(first, nth, last, [](const Node& a, const Node& b) { return a.y < b.y; });
  build(lo, mid, 1 - axis, level + 1);
  build(mid + 1, hi, 1 - axis, level + 1);
}

std::vector<Neighbor> PlanarIndex::knn(double u, double v, std::size_t k, QueryStats* stats) const {
  if (k < 1 || k > nodes_.size())
    throw InvalidArgument("knn: k = " + std::to_string(k) + " outside [1, " + std::to_string(nodes_.size()) + "]");

  std::priority_queue<Candidate> best;
  std::uint64_t visited = 0;

  // Explicit stack of (lo, hi, axis) ranges; near child is descended first.
  struct Frame {
    std::size_t lo;
    std::size_t hi;
    int axis;
    double plane_gap2;  // squared distance from query to the splitting plane of the parent
  };
  std::vector<Frame> stack;
  stack.push_back(Frame{0, nodes_.size(), 0, 0.0});
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.lo >= f.hi) continue;
    // Ties must still be explored: an equidistant point with a lower id can displace the worst.
    if (best.size() == k && f.plane_gap2 > best.top().dist2) continue;

    const std::size_t mid = f.lo + (f.hi - f.lo) / 2;
    const Node& node = nodes_[mid];
    ++visited;
    const double dx = node.x - u;
    const double dy = node.y - v;
    const Candidate c{dx * dx + dy * dy, node.id};
    if (best.size() < k) {
      best.push(c);
    } else if (c < best.top()) {
      best.pop();
      best.push(c);
    }

    const double diff = f.axis == 0 ? u - node.x : v - node.y;
    const Frame left{f.lo, mid, 1 - f.axis, diff < 0 ? 0.0 : diff * diff};
    const Frame right{mid + 1, f.hi, 1 - f.axis, diff > 0 ? 0.0 : diff * diff};
    // Push the far side first so the near side is popped next.
    if (diff < 0) {
      stack.push_back(right);
      stack.push_back(left);
    } else {
      stack.push_back(left);
      stack.push_back(right);
    }
  }

  std::vector<Neighbor> out(best.size());
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = Neighbor{best.top().id, std::sqrt(best.top().dist2)};
    best.pop();
  }
  if (stats) stats->visited_nodes += visited;
  return out;
}

std::vector<std::size_t> PlanarIndex::within_radius(double u, double v, double r, QueryStats* stats) const {
  if (!(r >= 0.0)) throw InvalidArgument("within_radius: negative radius");
  std::vector<std::size_t> ids;
  std::uint64_t visited = 0;
  const double r2 = r * r;

  struct Frame {
    std::size_t lo;
    std::size_t hi;
    int axis;
  };
  std::vector<Frame> stack;
  stack.push_back(Frame{0, nodes_.size(), 0});
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.lo >= f.hi) continue;
    const std::size_t mid = f.lo + (f.hi - f.lo) / 2;
    const Node& node = nodes_[mid];
    ++visited;
    const double dx = node.x - u;
    const double dy = node.y - v;
    if (dx * dx + dy * dy <= r2) ids.push_back(node.id);
    const double diff = f.axis == 0 ? u - node.x : v - node.y;
    if (diff <= 0 || diff * diff <= r2) stack.push_back(Frame{f.lo, mid, 1 - f.axis});
    if (diff >= 0 || diff * diff <= r2) stack.push_back(Frame{mid + 1, f.hi, 1 - f.axis});
  }
  std::sort(ids.begin(), ids.end());
  if (stats) stats->visited_nodes += visited;
  return ids;
}

}  // namespace wqisa
