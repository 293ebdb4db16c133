#include <string>

#include "cropclust/cluster.hpp"
#include "cropclust/errors.hpp"
#include "cropclust/parallel.hpp"

namespace cropclust {
namespace {

void require_positive_radius(double d) {
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw ParameterError("neighborhood distance d must be a positive finite number");
  }
}

}  // namespace

std::vector<KdTree3::Coord> coords_3d(const PointCloud& cloud) {
  std::vector<KdTree3::Coord> out(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Point3& p = cloud.points[i];
    out[i] = {p.x, p.y, p.z};
  }
  return out;
}

std::vector<KdTree2::Coord> coords_2d(const PointCloud& cloud) {
  std::vector<KdTree2::Coord> out(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    out[i] = {cloud.points[i].x, cloud.points[i].y};
  }
  return out;
}

ParentForest rain_parents(const KdTree3& index, double d, const RunOptions& options) {
  require_positive_radius(d);
  const double bound2 = d * d;
  ParentForest forest;
  forest.parent.resize(index.size());
  const auto& tree_order = index.tree_order();
  parallel_for(index.size(), options.threads, [&](std::size_t s) {
    const std::size_t i = tree_order[s];
    std::size_t best = i;
    double best_z = index.coord(i)[2];
    auto visit = [&](std::size_t j, double, const KdTree3::Coord& c) {
      const double z = c[2];
      if (z < best_z || (z == best_z && j < best)) {
        best = j;
        best_z = z;
      }
    };
    index.for_each_within(index.coord(i), bound2, visit);
    forest.parent[i] = static_cast<std::uint32_t>(best);
  });
  return forest;
}

ParentForest rain_parents(const PointCloud& cloud, double d, const RunOptions& options) {
  require_positive_radius(d);
  return rain_parents(KdTree3(coords_3d(cloud)), d, options);
}

ParentForest zqs_parents(const KdTree3& index, double d, const RunOptions& options) {
  require_positive_radius(d);
  ParentForest forest;
  forest.parent.resize(index.size());
  const auto& tree_order = index.tree_order();
  parallel_for(index.size(), options.threads, [&](std::size_t s) {
    const std::size_t i = tree_order[s];
    const double zi = index.coord(i)[2];
    auto lower = [&](std::size_t j) {
      const double zj = index.coord(j)[2];
      return zj < zi || (zj == zi && j < i);
    };
    const auto found = index.nearest_satisfying(i, lower, d);
    forest.parent[i] = static_cast<std::uint32_t>(found.value_or(i));
  });
  return forest;
}

ParentForest zqs_parents(const PointCloud& cloud, double d, const RunOptions& options) {
  require_positive_radius(d);
  return zqs_parents(KdTree3(coords_3d(cloud)), d, options);
}

ParentForest gdqs_parents(const KdTree2& ground_index, double d, const DensityField& density,
                          const RunOptions& options) {
  require_positive_radius(d);
  if (density.size() != ground_index.size()) {
    throw ContractError("density field has " + std::to_string(density.size()) +
                        " entries for " + std::to_string(ground_index.size()) + " points");
  }
  ParentForest forest;
  forest.parent.resize(ground_index.size());
  const auto& tree_order = ground_index.tree_order();
  parallel_for(ground_index.size(), options.threads, [&](std::size_t s) {
    const std::size_t i = tree_order[s];
    auto higher = [&](std::size_t j) { return density.denser(j, i); };
    const auto found = ground_index.nearest_satisfying(i, higher, d);
    forest.parent[i] = static_cast<std::uint32_t>(found.value_or(i));
  });
  return forest;
}

ParentForest gdqs_parents(const PointCloud& cloud, double d, const DensityField& density,
                          const RunOptions& options) {
  require_positive_radius(d);
  return gdqs_parents(KdTree2(coords_2d(cloud)), d, density, options);
}

}  // namespace cropclust
