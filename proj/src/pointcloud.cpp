#include "cropclust/pointcloud.hpp"

#include <cmath>
#include <string>

#include "cropclust/errors.hpp"

namespace cropclust {

void validate(const PointCloud& cloud) {
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const Point3& p = cloud.points[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw DataError("non-finite coordinate at point " + std::to_string(i));
    }
  }
  if (cloud.labels && cloud.labels->size() != cloud.points.size()) {
    throw DataError("label count " + std::to_string(cloud.labels->size()) +
                    " does not match point count " +
                    std::to_string(cloud.points.size()));
  }
}

PointCloud scaled(const PointCloud& cloud, float factor) {
  PointCloud out = cloud;
  for (Point3& p : out.points) {
    p.x *= factor;
    p.y *= factor;
    p.z *= factor;
  }
  return out;
}

}  // namespace cropclust
