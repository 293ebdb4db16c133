#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "cropclust/cluster.hpp"
#include "cropclust/eval.hpp"

namespace cropclust {

// "start:stop:step" -> start, start + step, ... up to stop (inclusive within
// rounding). Throws ParameterError on malformed or empty ranges.
std::vector<double> parse_sweep_range(std::string_view text);

struct SweepRun {
  double d = 0.0;
  MatchReport match;
  bool within_bound = false;
};

struct SweepResult {
  std::vector<SweepRun> runs;
  std::optional<std::size_t> best;  // index into runs
  Labeling best_labeling;
};

// Runs `base` once per d value and picks the run with the highest mean IoU
// among those whose matched cluster count (MatchReport::num_predicted) lies
// within `bound` (relative) of the truth cluster count. Earlier runs win
// ties. `best` is empty when no run qualifies.
SweepResult sweep_d(const PointCloud& cloud, const Params& base, const std::vector<double>& ds,
                    const Labeling& truth, bool ignore_ground, const RunOptions& options = {},
                    double bound = 0.2);

}  // namespace cropclust
