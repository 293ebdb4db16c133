#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "cropclust/pointcloud.hpp"

namespace testing_support {

using cropclust::Point3;
using cropclust::PointCloud;

inline PointCloud cloud_of(std::initializer_list<Point3> pts) {
  PointCloud c;
  c.points = pts;
  return c;
}

// Blobs of varying spread in the unit cube plus a few exact duplicates and
// vertical stacks, so that distance ties and coincident projections occur.
inline PointCloud random_cloud(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  std::uniform_int_distribution<int> blobs_dist(2, 8);

  const int blobs = blobs_dist(rng);
  std::vector<Point3> centers;
  std::vector<float> spread;
  for (int b = 0; b < blobs; ++b) {
    centers.push_back({unit(rng), unit(rng), 0.3f * unit(rng)});
    spread.push_back(0.02f + 0.08f * unit(rng));
  }

  PointCloud c;
  c.points.reserve(n);
  std::uniform_int_distribution<int> pick(0, blobs - 1);
  while (c.points.size() < n) {
    const float roll = unit(rng);
    if (roll < 0.03f && !c.points.empty()) {
      // exact duplicate
      std::uniform_int_distribution<std::size_t> any(0, c.points.size() - 1);
      c.points.push_back(c.points[any(rng)]);
    } else if (roll < 0.08f && !c.points.empty()) {
      // same projection, different height
      std::uniform_int_distribution<std::size_t> any(0, c.points.size() - 1);
      Point3 p = c.points[any(rng)];
      p.z += 0.05f * unit(rng);
      c.points.push_back(p);
    } else if (roll < 0.15f) {
      c.points.push_back({unit(rng), unit(rng), 0.01f * unit(rng)});
    } else {
      const int b = pick(rng);
      c.points.push_back({centers[b].x + spread[b] * normal(rng),
                          centers[b].y + spread[b] * normal(rng),
                          centers[b].z + spread[b] * std::abs(normal(rng))});
    }
  }
  return c;
}

// Uniform cloud without engineered ties.
inline PointCloud uniform_cloud(std::size_t n, std::uint64_t seed, float extent = 1.0f) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> unit(0.0f, extent);
  PointCloud c;
  for (std::size_t i = 0; i < n; ++i) c.points.push_back({unit(rng), unit(rng), unit(rng)});
  return c;
}

// Fresh per-test scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("cropclust_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing_support
