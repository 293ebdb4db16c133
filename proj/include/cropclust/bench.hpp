#pragma once

#include <optional>
#include <vector>

#include "cropclust/cluster.hpp"
#include "cropclust/synth.hpp"

namespace cropclust {

// Synthetic field of n points (one fewer when rounding the ground count
// falls short): 90% plant points in whole plants, the rest ground.
PointCloud bench_cloud(std::size_t n, std::uint64_t seed = 7);

struct BenchRow {
  std::size_t requested = 0;
  std::size_t points = 0;
  std::size_t clusters = 0;
  std::vector<double> seconds;  // one per repeat
  double median_seconds = 0.0;
  std::optional<double> ratio;  // median / previous row's median
};

// Times cluster() (no I/O) on bench_cloud(n) for each size; the reported
// time is the median over `repeats` runs. Repeats cycle through all sizes
// in turn.
std::vector<BenchRow> run_bench(const std::vector<std::size_t>& sizes, const Params& params,
                                std::size_t repeats, const RunOptions& options = {});

}  // namespace cropclust
