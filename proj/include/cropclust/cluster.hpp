#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cropclust/kdtree.hpp"
#include "cropclust/pointcloud.hpp"

namespace cropclust {

struct RunOptions {
  // Worker threads for per-point work; 0 = hardware parallelism. Results are
  // identical for every value.
  unsigned threads = 0;
};

// Per-point parent pointers; parent[i] == i marks a root (mode).
struct ParentForest {
  std::vector<std::uint32_t> parent;
};

// Ground-plane k-NN density. value[i] = r_k(i)^-2 where r_k is the distance
// from i to its k-th nearest other point after dropping z; coincident
// projections (r_k == 0) get +infinity. Points are totally ordered by
// (value, lower index first): `denser(a, b)` is that order.
struct DensityField {
  std::size_t k = 0;
  std::vector<double> value;
  // The k-th nearest other point of each point (index and squared 2D
  // distance) under the (distance, index) order.
  std::vector<Neighbor> kth;

  std::size_t size() const { return value.size(); }
  bool denser(std::size_t a, std::size_t b) const {
    return value[a] > value[b] || (value[a] == value[b] && a < b);
  }
};

struct Core {
  std::vector<std::uint32_t> members;  // ascending point indices
  std::uint32_t mode = 0;
  double mode_density = 0.0;
};

// Disjoint cluster cores, in the order they were locked during the sweep.
struct CoreSet {
  std::vector<Core> cores;
};

enum class Algorithm { kRain, kZQuickshift, kGdQuickshift, kGdQuickshiftPlusPlus };

// Parameter arity per algorithm:
//   rain, zqs: d      gdqs: d, k      gdqspp: k, beta
struct Params {
  Algorithm algorithm = Algorithm::kGdQuickshiftPlusPlus;
  std::optional<double> d;
  std::optional<std::size_t> k;
  std::optional<double> beta;
};

// "rain", "zqs", "gdqs", "gdqspp". Throws ParameterError for anything else.
Algorithm parse_algorithm(std::string_view name);
std::string_view algorithm_name(Algorithm algorithm);
// Human-readable arity table used in diagnostics.
std::string_view parameter_arity_table();

// Throws ParameterError when a required parameter is missing, an unused one
// is supplied, or a value is out of range (d <= 0, k == 0, beta outside
// [0, 1]).
void validate_params(const Params& params);

std::vector<KdTree3::Coord> coords_3d(const PointCloud& cloud);
std::vector<KdTree2::Coord> coords_2d(const PointCloud& cloud);

// Non-random RAIN: parent[i] is the (z, index)-minimum of the points within
// distance < d of p_i (p_i included).
ParentForest rain_parents(const PointCloud& cloud, double d, const RunOptions& options = {});
ParentForest rain_parents(const KdTree3& index, double d, const RunOptions& options = {});

// Z-Quickshift: parent[i] is the nearest point within distance < d that is
// lower under the (z, index) order; roots have no such point.
ParentForest zqs_parents(const PointCloud& cloud, double d, const RunOptions& options = {});
ParentForest zqs_parents(const KdTree3& index, double d, const RunOptions& options = {});

// Throws ParameterError unless 1 <= k <= n - 1.
DensityField knn_density_2d(const PointCloud& cloud, std::size_t k,
                            const RunOptions& options = {});
DensityField knn_density_2d(const KdTree2& ground_index, std::size_t k,
                            const RunOptions& options = {});

// Ground-density Quickshift: in the ground plane, parent[i] is the nearest
// point within distance < d that is denser than i.
ParentForest gdqs_parents(const PointCloud& cloud, double d, const DensityField& density,
                          const RunOptions& options = {});
ParentForest gdqs_parents(const KdTree2& ground_index, double d, const DensityField& density,
                          const RunOptions& options = {});

// Quickshift++ cluster cores from a density-ordered sweep over the mutual
// k-NN graph of the ground projection. j counts as a k-NN of i when
// dist(i, j) <= r_k(i), so every point tied at the k-th distance is included.
// `k` must match density.k.
CoreSet extract_cores(const PointCloud& cloud, const DensityField& density, std::size_t k,
                      double beta, const RunOptions& options = {});
CoreSet extract_cores(const KdTree2& ground_index, const DensityField& density, double beta,
                      const RunOptions& options = {});

// Labels core points by core, then hands every other point the label of its
// nearest denser neighbor in 3D (no distance cap).
Labeling gdqspp_assign(const PointCloud& cloud, const DensityField& density, const CoreSet& cores,
                       const RunOptions& options = {});
Labeling gdqspp_assign(const KdTree3& index, const DensityField& density, const CoreSet& cores,
                       const RunOptions& options = {});

// Root of every point, renumbered 1, 2, ... by first appearance in index
// order. Throws ContractError on cycles or out-of-range parents.
Labeling forest_to_labels(const ParentForest& forest);

// Renumbers arbitrary ids to 1, 2, ... by first appearance in index order.
Labeling relabel_by_first_appearance(const std::vector<std::uint32_t>& ids);

// Validates the parameters, then runs the selected pipeline. An empty cloud
// yields an empty labeling; density-based algorithms need at least two
// points (DataError) and k <= n - 1 (ParameterError).
Labeling cluster(const PointCloud& cloud, const Params& params, const RunOptions& options = {});

}  // namespace cropclust
