#include <algorithm>
#include <numeric>
#include <string>

#include "cropclust/cluster.hpp"
#include "cropclust/errors.hpp"
#include "cropclust/parallel.hpp"

namespace cropclust {

Labeling gdqspp_assign(const KdTree3& index, const DensityField& density, const CoreSet& cores,
                       const RunOptions& options) {
  const std::size_t n = index.size();
  if (density.size() != n) {
    throw ContractError("density field has " + std::to_string(density.size()) +
                        " entries for " + std::to_string(n) + " points");
  }
  if (n == 0) return {};
  if (cores.cores.empty()) throw ContractError("no cluster cores for a non-empty cloud");

  // 0 = not in any core, otherwise core position + 1.
  std::vector<std::uint32_t> label(n, 0);
  for (std::size_t c = 0; c < cores.cores.size(); ++c) {
    for (std::uint32_t p : cores.cores[c].members) {
      if (p >= n) throw ContractError("core member " + std::to_string(p) + " is out of range");
      if (label[p] != 0) {
        throw ContractError("point " + std::to_string(p) + " belongs to two cores");
      }
      label[p] = static_cast<std::uint32_t>(c + 1);
    }
  }

  // Non-core points in tree order, for query locality.
  std::vector<std::uint32_t> climbers;
  for (std::uint32_t i : index.tree_order()) {
    if (label[i] == 0) climbers.push_back(i);
  }

  // Nearest denser point in 3D for every non-core point.
  std::vector<std::uint32_t> parent(climbers.size());
  parallel_for(climbers.size(), options.threads, [&](std::size_t c) {
    const std::uint32_t i = climbers[c];
    auto higher = [&](std::size_t j) { return density.denser(j, i); };
    const auto found = index.nearest_satisfying(i, higher);
    if (!found) {
      throw ContractError("point " + std::to_string(i) +
                          " has no denser point and is not in a core");
    }
    parent[c] = static_cast<std::uint32_t>(*found);
  });

  // Parents are denser, so resolving climbers densest-first always finds
  // the parent already labeled.
  std::vector<std::uint32_t> by_density(climbers.size());
  std::iota(by_density.begin(), by_density.end(), 0u);
  std::sort(by_density.begin(), by_density.end(), [&](std::uint32_t a, std::uint32_t b) {
    return density.denser(climbers[a], climbers[b]);
  });
  for (std::uint32_t c : by_density) label[climbers[c]] = label[parent[c]];

  return relabel_by_first_appearance(label);
}

Labeling gdqspp_assign(const PointCloud& cloud, const DensityField& density, const CoreSet& cores,
                       const RunOptions& options) {
  return gdqspp_assign(KdTree3(coords_3d(cloud)), density, cores, options);
}

}  // namespace cropclust
