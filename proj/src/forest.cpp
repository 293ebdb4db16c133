#include <limits>
#include <string>

#include "cropclust/cluster.hpp"
#include "cropclust/errors.hpp"

namespace cropclust {

Labeling relabel_by_first_appearance(const std::vector<std::uint32_t>& ids) {
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> remap;
  Labeling out(ids.size());
  std::uint32_t next = 1;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const std::uint32_t id = ids[i];
    if (id >= remap.size()) remap.resize(static_cast<std::size_t>(id) + 1, kUnset);
    if (remap[id] == kUnset) remap[id] = next++;
    out[i] = remap[id];
  }
  return out;
}

Labeling forest_to_labels(const ParentForest& forest) {
  const auto& parent = forest.parent;
  const std::size_t n = parent.size();
  constexpr std::uint32_t kUnknown = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> root(n, kUnknown);
  std::vector<std::uint32_t> path;

  for (std::size_t i = 0; i < n; ++i) {
    if (root[i] != kUnknown) continue;
    path.clear();
    std::size_t cur = i;
    std::size_t steps = 0;
    while (root[cur] == kUnknown && parent[cur] != cur) {
      if (parent[cur] >= n) {
        throw ContractError("parent of point " + std::to_string(cur) + " is out of range");
      }
      if (++steps > n) throw ContractError("parent forest contains a cycle");
      path.push_back(static_cast<std::uint32_t>(cur));
      cur = parent[cur];
    }
    const std::uint32_t r = root[cur] != kUnknown ? root[cur] : static_cast<std::uint32_t>(cur);
    root[cur] = r;
    for (std::uint32_t p : path) root[p] = r;
  }
  return relabel_by_first_appearance(root);
}

}  // namespace cropclust
