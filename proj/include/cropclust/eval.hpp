#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cropclust/pointcloud.hpp"

namespace cropclust {

// |a ∩ b| / |a ∪ b| over point-index sets (duplicates ignored); 0 when both
// are empty.
double iou(std::vector<std::uint32_t> a, std::vector<std::uint32_t> b);

struct MatchPair {
  std::uint32_t predicted = 0;
  std::uint32_t truth = 0;
  double iou = 0.0;
};

// One-to-one matching between predicted and truth clusters that maximizes
// the summed IoU. Every assignment the matching makes is listed in `pairs`
// (min(num_predicted, num_truth) of them, zero-IoU pairs included); mean and
// median are taken over those pairs.
struct MatchReport {
  std::size_t num_predicted = 0;
  std::size_t num_truth = 0;
  std::vector<MatchPair> pairs;  // ascending by truth id
  double iou_sum = 0.0;
  double mean_iou = 0.0;
  double median_iou = 0.0;
  std::vector<std::uint32_t> unmatched_predicted;
  std::vector<std::uint32_t> unmatched_truth;
};

// With ignore_truth_label_zero, points whose truth label is 0 (ground) are
// left out of every cluster before IoUs are computed, so num_predicted counts
// only predicted clusters that contain at least one non-ground point.
// Throws ContractError when the labelings differ in length.
MatchReport match_clusters(const Labeling& predicted, const Labeling& truth,
                           bool ignore_truth_label_zero = true);

struct CountReport {
  std::size_t total_clusters = 0;
  std::size_t total_plants = 0;          // distinct non-zero truth labels
  std::size_t multi_plant_clusters = 0;  // >= 2 distinct non-zero truth labels
  std::size_t extraneous_clusters = 0;   // no non-zero truth point
};

// Truth label 0 is ground. Throws ContractError on length mismatch.
CountReport count_report(const Labeling& labeling, const Labeling& truth);

}  // namespace cropclust
