#include "cropclust/sweep.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "cropclust/errors.hpp"

namespace cropclust {

std::vector<double> parse_sweep_range(std::string_view text) {
  double parts[3] = {0.0, 0.0, 0.0};
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t end = i < 2 ? text.find(':', pos) : text.size();
    if (end == std::string_view::npos) {
      throw ParameterError("sweep range '" + std::string(text) + "' must be start:stop:step");
    }
    const std::string_view field = text.substr(pos, end - pos);
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), parts[i]);
    if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(parts[i])) {
      throw ParameterError("invalid number '" + std::string(field) + "' in sweep range");
    }
    pos = end + 1;
  }
  const auto [start, stop, step] = parts;
  if (!(step > 0.0) || !(start > 0.0) || stop < start) {
    throw ParameterError("sweep range needs 0 < start <= stop and step > 0");
  }
  std::vector<double> values;
  const double slack = step * 1e-9;
  for (std::size_t i = 0;; ++i) {
    const double v = start + static_cast<double>(i) * step;
    if (v > stop + slack) break;
    values.push_back(v);
  }
  return values;
}

SweepResult sweep_d(const PointCloud& cloud, const Params& base, const std::vector<double>& ds,
                    const Labeling& truth, bool ignore_ground, const RunOptions& options,
                    double bound) {
  SweepResult result;
  double best_mean = -1.0;

  // GD Quickshift density does not depend on d; compute it once when the
  // parameters are valid and let cluster() report the error otherwise.
  std::optional<KdTree2> ground;
  std::optional<DensityField> density;
  if (base.algorithm == Algorithm::kGdQuickshift && !ds.empty() && base.k &&
      cloud.size() >= 2 && *base.k >= 1 && *base.k < cloud.size()) {
    Params first = base;
    first.d = ds.front();
    validate_params(first);
    ground.emplace(coords_2d(cloud));
    density = knn_density_2d(*ground, *base.k, options);
  }

  for (double d : ds) {
    Params params = base;
    params.d = d;
    Labeling labels;
    if (density) {
      validate_params(params);
      labels = forest_to_labels(gdqs_parents(*ground, d, *density, options));
    } else {
      labels = cluster(cloud, params, options);
    }
    SweepRun run;
    run.d = d;
    run.match = match_clusters(labels, truth, ignore_ground);
    const double truth_count = static_cast<double>(run.match.num_truth);
    run.within_bound =
        std::abs(static_cast<double>(run.match.num_predicted) - truth_count) <= bound * truth_count;
    if (run.within_bound && run.match.mean_iou > best_mean) {
      best_mean = run.match.mean_iou;
      result.best = result.runs.size();
      result.best_labeling = std::move(labels);
    }
    result.runs.push_back(std::move(run));
  }
  return result;
}

}  // namespace cropclust
