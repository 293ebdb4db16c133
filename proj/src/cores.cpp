#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cropclust/cluster.hpp"
#include "cropclust/errors.hpp"
#include "cropclust/parallel.hpp"

namespace cropclust {
namespace {

// Indices sorted densest first.
std::vector<std::uint32_t> sweep_order(const DensityField& density) {
  std::vector<std::uint32_t> order(density.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return density.denser(a, b); });
  return order;
}

// Whether an unlocked component with mode density `mode` locks once the
// sweep has reached a point of density `level`.
bool should_lock(double level, double mode, double beta) {
  if (beta >= 1.0) return false;
  if (std::isinf(mode)) return beta == 0.0 || !std::isinf(level);
  return level < (1.0 - beta) * mode;
}

// Union-find over processed points. Root-only fields describe the
// component: its mode, whether it has locked, and (while unlocked) its
// members.
class SweepComponents {
 public:
  SweepComponents(std::size_t n, const DensityField& density)
      : density_(density), parent_(n), size_(n, 0), mode_(n), locked_(n, 0), members_(n) {}

  void add(std::uint32_t p) {
    parent_[p] = p;
    size_[p] = 1;
    mode_[p] = p;
    members_[p] = {p};
  }

  std::uint32_t find(std::uint32_t p) {
    while (parent_[p] != p) {
      parent_[p] = parent_[parent_[p]];
      p = parent_[p];
    }
    return p;
  }

  bool is_live_mode(std::uint32_t m) {
    const std::uint32_t r = find(m);
    return !locked_[r] && mode_[r] == m;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    std::uint32_t ra = find(a);
    std::uint32_t rb = find(b);
    if (ra == rb) return;
    if (size_[ra] < size_[rb]) std::swap(ra, rb);
    parent_[rb] = ra;
    size_[ra] += size_[rb];

    if (locked_[ra] || locked_[rb]) {
      // A locked component absorbs the other; absorbed points are not core.
      locked_[ra] = 1;
      release(ra);
      release(rb);
      return;
    }
    if (density_.denser(mode_[rb], mode_[ra])) mode_[ra] = mode_[rb];
    auto& into = members_[ra];
    auto& from = members_[rb];
    if (into.size() < from.size()) into.swap(from);
    into.insert(into.end(), from.begin(), from.end());
    release(rb);
  }

  // Snapshots the component of live mode m as a core.
  Core lock(std::uint32_t m) {
    const std::uint32_t r = find(m);
    Core core;
    core.members = std::move(members_[r]);
    std::sort(core.members.begin(), core.members.end());
    core.mode = m;
    core.mode_density = density_.value[m];
    locked_[r] = 1;
    release(r);
    return core;
  }

 private:
  void release(std::uint32_t r) { std::vector<std::uint32_t>().swap(members_[r]); }

  const DensityField& density_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<std::uint32_t> mode_;
  std::vector<std::uint8_t> locked_;
  std::vector<std::vector<std::uint32_t>> members_;
};

}  // namespace

CoreSet extract_cores(const KdTree2& ground_index, const DensityField& density, double beta,
                      const RunOptions& options) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ParameterError("beta must lie in [0, 1]");
  const std::size_t n = ground_index.size();
  if (density.size() != n || density.kth.size() != n) {
    throw ContractError("density field has " + std::to_string(density.size()) +
                        " entries for " + std::to_string(n) + " points");
  }
  CoreSet result;
  if (n == 0) return result;
  const std::vector<std::uint32_t> order = sweep_order(density);
  std::vector<std::uint32_t> rank(n);
  for (std::size_t r = 0; r < n; ++r) rank[order[r]] = static_cast<std::uint32_t>(r);

  // Per-point data the edge queries read, laid out in tree slot order.
  const auto& tree_order = ground_index.tree_order();
  std::vector<std::uint32_t> slot_rank(n);
  std::vector<double> slot_kth2(n);
  for (std::size_t s = 0; s < n; ++s) {
    slot_rank[s] = rank[tree_order[s]];
    slot_kth2[s] = density.kth[tree_order[s]].dist2;
  }

  SweepComponents components(n, density);
  std::vector<std::uint32_t> pending_modes;  // creation order == density order
  std::size_t pending_head = 0;
  pending_modes.reserve(n);

  auto lock_ready = [&](std::size_t level_point) {
    const double level = density.value[level_point];
    while (pending_head < pending_modes.size()) {
      const std::uint32_t m = pending_modes[pending_head];
      if (!components.is_live_mode(m)) {
        ++pending_head;
        continue;
      }
      // Lock thresholds are monotone in mode density, so the oldest live
      // mode is always the first to lock.
      if (!should_lock(level, density.value[m], beta)) break;
      result.cores.push_back(components.lock(m));
      ++pending_head;
    }
  };

  // Mutual k-NN edges to already-swept points depend only on the static
  // density order, so they are computed in parallel one block at a time and
  // consumed sequentially.
  constexpr std::size_t kBlock = 4096;
  std::vector<std::vector<std::uint32_t>> edges(std::min(kBlock, n));
  for (std::size_t start = 0; start < n; start += kBlock) {
    const std::size_t stop = std::min(n, start + kBlock);
    parallel_for(stop - start, options.threads, [&](std::size_t off) {
      const std::uint32_t p = order[start + off];
      auto& out = edges[off];
      out.clear();
      // Ties at the k-th distance count as neighbors, so coincident
      // projections are all mutually connected.
      const double r2 = density.kth[p].dist2;
      const double bound2 = std::nextafter(r2, std::numeric_limits<double>::infinity());
      const std::uint32_t rank_p = rank[p];
      auto visit = [&](std::uint32_t s, double d2) {
        // Equal rank means j == p.
        if (slot_rank[s] >= rank_p || d2 > slot_kth2[s]) return;
        out.push_back(tree_order[s]);
      };
      ground_index.for_each_slot_within(ground_index.coord(p), bound2, visit);
      std::sort(out.begin(), out.end());
    });

    for (std::size_t off = 0; off < stop - start; ++off) {
      const std::uint32_t p = order[start + off];
      lock_ready(p);
      components.add(p);
      pending_modes.push_back(p);
      for (std::uint32_t j : edges[off]) components.unite(p, j);
    }
  }

  for (; pending_head < pending_modes.size(); ++pending_head) {
    const std::uint32_t m = pending_modes[pending_head];
    if (components.is_live_mode(m)) result.cores.push_back(components.lock(m));
  }
  return result;
}

CoreSet extract_cores(const PointCloud& cloud, const DensityField& density, std::size_t k,
                      double beta, const RunOptions& options) {
  if (k != density.k) {
    throw ContractError("density was computed with k = " + std::to_string(density.k) +
                        ", not " + std::to_string(k));
  }
  return extract_cores(KdTree2(coords_2d(cloud)), density, beta, options);
}

}  // namespace cropclust
