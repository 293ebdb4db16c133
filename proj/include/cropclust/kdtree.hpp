#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <vector>

namespace cropclust {

// A query result: original point index and squared Euclidean distance.
struct Neighbor {
  std::uint32_t index = 0;
  double dist2 = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Strict (distance, index) order used for every neighbor ranking.
inline bool closer(const Neighbor& a, const Neighbor& b) {
  return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
}

// Immutable balanced kD-tree over 2D or 3D points. Built once by median
// splits; all queries are const and may run concurrently.
//
// Radius queries use the strict bound dist2 < d*d, so a point at distance
// exactly d is excluded. Ties in distance are always broken by the smaller
// original index.
template <int Dim>
class KdTree {
  static_assert(Dim == 2 || Dim == 3, "KdTree supports 2D and 3D points");

 public:
  using Coord = std::array<double, Dim>;

  KdTree() = default;
  // Throws DataError naming the first non-finite point.
  explicit KdTree(std::vector<Coord> coords);

  std::size_t size() const { return coords_.size(); }
  const Coord& coord(std::size_t i) const { return coords_[i]; }
  // Original indices in tree order. Running per-point queries in this order
  // keeps consecutive queries spatially close.
  const std::vector<std::uint32_t>& tree_order() const { return order_; }

  static double dist2(const Coord& a, const Coord& b) {
    double s = 0.0;
    for (int d = 0; d < Dim; ++d) {
      const double t = a[d] - b[d];
      s += t * t;
    }
    return s;
  }

  // Points with distance < d from q, ascending by (distance, index).
  // Throws ParameterError unless d > 0.
  std::vector<Neighbor> radius_neighbors(const Coord& q, double d) const;

  // The k closest points to q in (distance, index) order, skipping `exclude`.
  std::vector<Neighbor> nearest(const Coord& q, std::size_t k,
                                std::optional<std::size_t> exclude = std::nullopt) const;

  // k-th nearest other point of a cloud member (self excluded, duplicates
  // count). Throws ParameterError unless 1 <= k <= n-1.
  Neighbor kth_neighbor(std::size_t query_index, std::size_t k) const;
  double kth_neighbor_distance(std::size_t query_index, std::size_t k) const;

  // Calls visit(index, dist2, coord) for every point with dist2 < bound2, in
  // tree order.
  template <typename Visit>
  void for_each_within(const Coord& q, double bound2, Visit&& visit) const;

  // Same, but calls visit(slot, dist2) with the tree slot (position in
  // tree_order()), so callers can keep per-point data in slot order.
  template <typename Visit>
  void for_each_slot_within(const Coord& q, double bound2, Visit&& visit) const;

  // Nearest point (excluding the query) for which accept(index) holds, within
  // distance < max_dist; ties go to the smaller index. Enumerates neighbors
  // lazily in (distance, index) order by best-first traversal, so the cost
  // depends on how many rejected points are closer than the answer.
  template <typename Accept>
  std::optional<std::size_t> nearest_satisfying(
      std::size_t query_index, Accept&& accept,
      double max_dist = std::numeric_limits<double>::infinity()) const;

 private:
  struct Node {
    Coord lo{};
    Coord hi{};
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;

    bool leaf() const { return left < 0; }
  };

  static constexpr std::uint32_t kLeafSize = 16;
  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  double node_dist2(const Node& node, const Coord& q) const {
    double s = 0.0;
    for (int d = 0; d < Dim; ++d) {
      double t = 0.0;
      if (q[d] < node.lo[d]) {
        t = node.lo[d] - q[d];
      } else if (q[d] > node.hi[d]) {
        t = q[d] - node.hi[d];
      }
      s += t * t;
    }
    return s;
  }
  void nearest_rec(std::int32_t node, const Coord& q, std::size_t k,
                   std::optional<std::size_t> exclude, std::vector<Neighbor>& buffer,
                   Neighbor& bound) const;

  std::vector<Coord> coords_;         // original order
  std::vector<std::uint32_t> order_;  // tree slot -> original index
  std::vector<Coord> packed_;         // coordinates in tree slot order
  std::vector<Node> nodes_;
};

using KdTree2 = KdTree<2>;
using KdTree3 = KdTree<3>;

extern template class KdTree<2>;
extern template class KdTree<3>;

template <int Dim>
template <typename Visit>
void KdTree<Dim>::for_each_slot_within(const Coord& q, double bound2, Visit&& visit) const {
  if (nodes_.empty()) return;
  // Median splits keep the depth below 32, and the stack never holds more
  // than two entries per level.
  std::int32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (node_dist2(node, q) >= bound2) continue;
    if (node.leaf()) {
      for (std::uint32_t s = node.begin; s < node.end; ++s) {
        const double d2 = dist2(packed_[s], q);
        if (d2 < bound2) visit(s, d2);
      }
    } else {
      stack[top++] = node.right;
      stack[top++] = node.left;
    }
  }
}

template <int Dim>
template <typename Visit>
void KdTree<Dim>::for_each_within(const Coord& q, double bound2, Visit&& visit) const {
  for_each_slot_within(q, bound2, [&](std::uint32_t s, double d2) {
    visit(static_cast<std::size_t>(order_[s]), d2, packed_[s]);
  });
}

template <int Dim>
template <typename Accept>
std::optional<std::size_t> KdTree<Dim>::nearest_satisfying(std::size_t query_index,
                                                           Accept&& accept,
                                                           double max_dist) const {
  if (nodes_.empty()) return std::nullopt;
  const Coord& q = coords_[query_index];
  const double bound2 = max_dist * max_dist;

  // Nodes sort before points at equal distance so that every point at that
  // distance is enqueued before the first of them is popped.
  struct Entry {
    double dist2;
    bool is_point;
    std::uint32_t id;
  };
  auto later = [](const Entry& a, const Entry& b) {
    if (a.dist2 != b.dist2) return a.dist2 > b.dist2;
    if (a.is_point != b.is_point) return a.is_point;
    return a.id > b.id;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(later)> queue(later);
  queue.push({node_dist2(nodes_[0], q), false, 0});

  while (!queue.empty()) {
    const Entry top = queue.top();
    queue.pop();
    if (top.is_point) {
      if (accept(static_cast<std::size_t>(top.id))) return top.id;
      continue;
    }
    const Node& node = nodes_[top.id];
    if (node.leaf()) {
      for (std::uint32_t s = node.begin; s < node.end; ++s) {
        const std::uint32_t idx = order_[s];
        if (idx == query_index) continue;
        const double d2 = dist2(packed_[s], q);
        if (d2 < bound2) queue.push({d2, true, idx});
      }
    } else {
      for (std::int32_t child : {node.left, node.right}) {
        const double d2 = node_dist2(nodes_[child], q);
        if (d2 < bound2) queue.push({d2, false, static_cast<std::uint32_t>(child)});
      }
    }
  }
  return std::nullopt;
}

}  // namespace cropclust
