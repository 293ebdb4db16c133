#include "cropclust/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "cropclust/errors.hpp"

namespace cropclust {

PointCloud bench_cloud(std::size_t n, std::uint64_t seed) {
  FieldSpec spec;
  spec.seed = seed;
  spec.double_plant_prob = 0.0;
  // A fixed 90% share of plant points at every size, so that timings of
  // different sizes compare like with like. The grid is filled row-major
  // up to `plants`; surplus grid positions are dropped.
  std::size_t plants = n * 9 / 10 / spec.points_per_plant;
  if (plants == 0) {
    spec.points_per_plant = std::max<std::size_t>(1, n * 9 / 10);
    plants = 1;
  }
  spec.rows = std::min<std::size_t>(10, plants);
  spec.cols = (plants + spec.rows - 1) / spec.rows;
  const std::size_t plant_points = plants * spec.points_per_plant;
  const double area = static_cast<double>(spec.cols) * spec.plant_spacing *
                      static_cast<double>(spec.rows) * spec.row_spacing;
  spec.ground_point_density = static_cast<double>(n > plant_points ? n - plant_points : 0) / area;

  const SyntheticField field = generate_field(spec);
  const std::size_t total = field.cloud.size();
  PointCloud cloud;
  Labeling labels;
  cloud.points.assign(field.cloud.points.begin(), field.cloud.points.begin() + plant_points);
  labels.assign(field.cloud.labels->begin(), field.cloud.labels->begin() + plant_points);
  const std::size_t ground_begin = total - field.num_ground;
  const std::size_t keep = std::min(field.num_ground, n > plant_points ? n - plant_points : 0);
  cloud.points.insert(cloud.points.end(), field.cloud.points.begin() + ground_begin,
                      field.cloud.points.begin() + ground_begin + keep);
  labels.insert(labels.end(), keep, 0);
  if (cloud.points.size() > n) {
    cloud.points.resize(n);
    labels.resize(n);
  }
  cloud.labels = std::move(labels);
  return cloud;
}

std::vector<BenchRow> run_bench(const std::vector<std::size_t>& sizes, const Params& params,
                                std::size_t repeats, const RunOptions& options) {
  validate_params(params);
  if (repeats == 0) throw ParameterError("repeats must be positive");
  std::vector<PointCloud> clouds;
  std::vector<BenchRow> rows(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    clouds.push_back(bench_cloud(sizes[i]));
    rows[i].requested = sizes[i];
    rows[i].points = clouds[i].size();
  }

  // Repeats go round-robin over the sizes, so slow stretches of machine
  // time spread over all rows instead of skewing one.
  for (std::size_t r = 0; r < repeats; ++r) {
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const auto start = std::chrono::steady_clock::now();
      const Labeling labels = cluster(clouds[i], params, options);
      const auto stop = std::chrono::steady_clock::now();
      rows[i].seconds.push_back(std::chrono::duration<double>(stop - start).count());
      rows[i].clusters = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end());
    }
  }

  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<double> sorted = rows[i].seconds;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    rows[i].median_seconds =
        sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    if (i > 0 && rows[i - 1].median_seconds > 0.0) {
      rows[i].ratio = rows[i].median_seconds / rows[i - 1].median_seconds;
    }
  }
  return rows;
}

}  // namespace cropclust
