#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace cropclust {

// Gravity-aligned point: +z is up. Coordinates are stored as float32, the
// precision PLY files carry, so in-memory clouds and their binary PLY
// encoding are bit-identical.
struct Point3 {
  float x = 0.0f;
  float y = 0.0f;
  float z = 0.0f;

  friend bool operator==(const Point3&, const Point3&) = default;
};

// One cluster id per point. Produced labelings use consecutive ids from 1;
// ground-truth labelings reserve 0 for ground/unlabeled points.
using Labeling = std::vector<std::uint32_t>;

struct PointCloud {
  std::vector<Point3> points;
  std::optional<Labeling> labels;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_labels() const { return labels.has_value(); }
};

// Throws DataError naming the first non-finite point, or when the label
// vector length disagrees with the point count.
void validate(const PointCloud& cloud);

// Uniform scaling of every coordinate, used by scale-invariance checks.
PointCloud scaled(const PointCloud& cloud, float factor);

}  // namespace cropclust
