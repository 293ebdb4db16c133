#include "cropclust/report.hpp"

namespace cropclust {

nlohmann::json to_json(const MatchReport& report) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const MatchPair& p : report.pairs) {
    pairs.push_back({{"predicted", p.predicted}, {"truth", p.truth}, {"iou", p.iou}});
  }
  return {
      {"num_predicted", report.num_predicted},
      {"num_truth", report.num_truth},
      {"pairs", pairs},
      {"iou_sum", report.iou_sum},
      {"mean_iou", report.mean_iou},
      {"median_iou", report.median_iou},
      {"unmatched_predicted", report.unmatched_predicted},
      {"unmatched_truth", report.unmatched_truth},
  };
}

nlohmann::json to_json(const CountReport& report) {
  return {
      {"total_clusters", report.total_clusters},
      {"total_plants", report.total_plants},
      {"multi_plant_clusters", report.multi_plant_clusters},
      {"extraneous_clusters", report.extraneous_clusters},
  };
}

nlohmann::json eval_report(const MatchReport& match, const CountReport& counts) {
  return {{"schema", kReportSchema}, {"match", to_json(match)}, {"counts", to_json(counts)}};
}

}  // namespace cropclust
