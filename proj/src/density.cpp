#include <limits>
#include <string>

#include "cropclust/cluster.hpp"
#include "cropclust/errors.hpp"
#include "cropclust/parallel.hpp"

namespace cropclust {

DensityField knn_density_2d(const KdTree2& ground_index, std::size_t k,
                            const RunOptions& options) {
  const std::size_t n = ground_index.size();
  if (k < 1 || k >= n) {
    throw ParameterError("k = " + std::to_string(k) + " must lie in [1, n - 1] for n = " +
                         std::to_string(n) + " points");
  }
  DensityField field;
  field.k = k;
  field.value.resize(n);
  field.kth.resize(n);
  const auto& tree_order = ground_index.tree_order();
  parallel_for(n, options.threads, [&](std::size_t s) {
    const std::size_t i = tree_order[s];
    const Neighbor kth = ground_index.kth_neighbor(i, k);
    field.kth[i] = kth;
    field.value[i] = kth.dist2 > 0.0 ? 1.0 / kth.dist2
                                     : std::numeric_limits<double>::infinity();
  });
  return field;
}

DensityField knn_density_2d(const PointCloud& cloud, std::size_t k, const RunOptions& options) {
  return knn_density_2d(KdTree2(coords_2d(cloud)), k, options);
}

}  // namespace cropclust
