#include "cropclust/kdtree.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "cropclust/errors.hpp"

namespace cropclust {

template <int Dim>
KdTree<Dim>::KdTree(std::vector<Coord> coords) : coords_(std::move(coords)) {
  if (coords_.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw DataError("too many points for the spatial index");
  }
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    for (int d = 0; d < Dim; ++d) {
      if (!std::isfinite(coords_[i][d])) {
        throw DataError("non-finite coordinate at point " + std::to_string(i));
      }
    }
  }
  if (coords_.empty()) return;

  order_.resize(coords_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  nodes_.reserve(2 * coords_.size() / kLeafSize + 1);
  build(0, static_cast<std::uint32_t>(coords_.size()));

  packed_.resize(coords_.size());
  for (std::size_t s = 0; s < order_.size(); ++s) packed_[s] = coords_[order_[s]];
}

template <int Dim>
std::int32_t KdTree<Dim>::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();
  Node node;
  node.begin = begin;
  node.end = end;
  node.lo = coords_[order_[begin]];
  node.hi = node.lo;
  for (std::uint32_t s = begin + 1; s < end; ++s) {
    const Coord& c = coords_[order_[s]];
    for (int d = 0; d < Dim; ++d) {
      node.lo[d] = std::min(node.lo[d], c[d]);
      node.hi[d] = std::max(node.hi[d], c[d]);
    }
  }

  int split = 0;
  double extent = node.hi[0] - node.lo[0];
  for (int d = 1; d < Dim; ++d) {
    if (node.hi[d] - node.lo[d] > extent) {
      extent = node.hi[d] - node.lo[d];
      split = d;
    }
  }

  // Coincident points cannot be separated; they stay in one leaf.
  if (end - begin > kLeafSize && extent > 0.0) {
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                       const double ca = coords_[a][split];
                       const double cb = coords_[b][split];
                       return ca < cb || (ca == cb && a < b);
                     });
    node.left = build(begin, mid);
    node.right = build(mid, end);
  }
  nodes_[id] = node;
  return id;
}

template <int Dim>
std::vector<Neighbor> KdTree<Dim>::radius_neighbors(const Coord& q, double d) const {
  if (!(d > 0.0)) throw ParameterError("radius must be positive");
  std::vector<Neighbor> out;
  for_each_within(q, d * d, [&](std::size_t i, double d2, const Coord&) {
    out.push_back({static_cast<std::uint32_t>(i), d2});
  });
  std::sort(out.begin(), out.end(), closer);
  return out;
}

template <int Dim>
void KdTree<Dim>::nearest_rec(std::int32_t id, const Coord& q, std::size_t k,
                              std::optional<std::size_t> exclude,
                              std::vector<Neighbor>& buffer, Neighbor& bound) const {
  const Node& node = nodes_[id];
  if (node.leaf()) {
    for (std::uint32_t s = node.begin; s < node.end; ++s) {
      const std::uint32_t idx = order_[s];
      if (exclude && idx == *exclude) continue;
      const Neighbor cand{idx, dist2(packed_[s], q)};
      if (!closer(cand, bound)) continue;
      buffer.push_back(cand);
      if (buffer.size() == 2 * k) {
        // Keep the k best and tighten the bound to the k-th of them.
        std::nth_element(buffer.begin(), buffer.begin() + (k - 1), buffer.end(), closer);
        buffer.resize(k);
        bound = buffer[k - 1];
      } else if (buffer.size() == k && bound.dist2 == kInfinity) {
        bound = *std::max_element(buffer.begin(), buffer.end(), closer);
      }
    }
    return;
  }
  const double dl = node_dist2(nodes_[node.left], q);
  const double dr = node_dist2(nodes_[node.right], q);
  const std::int32_t first = dl <= dr ? node.left : node.right;
  const std::int32_t second = dl <= dr ? node.right : node.left;
  // An equal-distance subtree may still hold a smaller index, so prune only
  // on strictly greater bounds.
  if (std::min(dl, dr) <= bound.dist2) nearest_rec(first, q, k, exclude, buffer, bound);
  if (std::max(dl, dr) <= bound.dist2) nearest_rec(second, q, k, exclude, buffer, bound);
}

template <int Dim>
std::vector<Neighbor> KdTree<Dim>::nearest(const Coord& q, std::size_t k,
                                           std::optional<std::size_t> exclude) const {
  std::vector<Neighbor> buffer;
  if (k == 0 || nodes_.empty()) return buffer;
  buffer.reserve(2 * k);
  Neighbor bound{std::numeric_limits<std::uint32_t>::max(), kInfinity};
  nearest_rec(0, q, k, exclude, buffer, bound);
  if (buffer.size() > k) {
    std::nth_element(buffer.begin(), buffer.begin() + (k - 1), buffer.end(), closer);
    buffer.resize(k);
  }
  std::sort(buffer.begin(), buffer.end(), closer);
  return buffer;
}

template <int Dim>
Neighbor KdTree<Dim>::kth_neighbor(std::size_t query_index, std::size_t k) const {
  if (query_index >= size()) throw ParameterError("query index out of range");
  if (k < 1 || k >= size()) {
    throw ParameterError("k = " + std::to_string(k) + " must lie in [1, " +
                         std::to_string(size() == 0 ? 0 : size() - 1) + "]");
  }
  return nearest(coords_[query_index], k, query_index).back();
}

template <int Dim>
double KdTree<Dim>::kth_neighbor_distance(std::size_t query_index, std::size_t k) const {
  return std::sqrt(kth_neighbor(query_index, k).dist2);
}

template class KdTree<2>;
template class KdTree<3>;

}  // namespace cropclust
