#include "cropclust/eval.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "cropclust/errors.hpp"
#include "cropclust/hungarian.hpp"

namespace cropclust {
namespace {

void require_same_length(const Labeling& a, const Labeling& b) {
  if (a.size() != b.size()) {
    throw ContractError("labelings cover " + std::to_string(a.size()) + " and " +
                        std::to_string(b.size()) + " points");
  }
}

// Sorted distinct ids and a dense position for every point's id.
struct Dense {
  std::vector<std::uint32_t> ids;
  std::vector<std::uint32_t> of_point;
  std::vector<std::size_t> sizes;
};

Dense densify(const Labeling& labels, const std::vector<char>& keep) {
  Dense d;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (keep[i]) d.ids.push_back(labels[i]);
  }
  std::sort(d.ids.begin(), d.ids.end());
  d.ids.erase(std::unique(d.ids.begin(), d.ids.end()), d.ids.end());
  d.of_point.assign(labels.size(), 0);
  d.sizes.assign(d.ids.size(), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!keep[i]) continue;
    const auto pos = static_cast<std::uint32_t>(
        std::lower_bound(d.ids.begin(), d.ids.end(), labels[i]) - d.ids.begin());
    d.of_point[i] = pos;
    ++d.sizes[pos];
  }
  return d;
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

double iou(std::vector<std::uint32_t> a, std::vector<std::uint32_t> b) {
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++inter;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

MatchReport match_clusters(const Labeling& predicted, const Labeling& truth,
                           bool ignore_truth_label_zero) {
  require_same_length(predicted, truth);
  std::vector<char> keep(truth.size(), 1);
  if (ignore_truth_label_zero) {
    for (std::size_t i = 0; i < truth.size(); ++i) keep[i] = truth[i] != 0;
  }
  const Dense pred = densify(predicted, keep);
  const Dense tru = densify(truth, keep);
  const std::size_t rows = pred.ids.size();
  const std::size_t cols = tru.ids.size();

  // Sparse intersection counts per (predicted, truth) pair.
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> inter;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (keep[i]) ++inter[{pred.of_point[i], tru.of_point[i]}];
  }
  auto pair_iou = [&](std::uint32_t r, std::uint32_t c, std::size_t n) {
    return static_cast<double>(n) / static_cast<double>(pred.sizes[r] + tru.sizes[c] - n);
  };

  MatchReport report;
  report.num_predicted = rows;
  report.num_truth = cols;

  // Each truth cluster is matched within its top-`cols` predicted clusters
  // in some optimal matching (an exchange argument), so only the union of
  // those candidate rows enters the assignment problem. Ties and zero-IoU
  // fill-ins go to the lowest row.
  std::vector<std::vector<std::pair<double, std::uint32_t>>> by_col(cols);
  for (const auto& [key, n] : inter) by_col[key.second].push_back({pair_iou(key.first, key.second, n), key.first});
  std::vector<char> candidate(rows, 0);
  const std::size_t quota = std::min(rows, cols);
  for (std::size_t c = 0; c < cols; ++c) {
    auto& list = by_col[c];
    std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
      return a.first > b.first || (a.first == b.first && a.second < b.second);
    });
    std::size_t taken = 0;
    for (const auto& entry : list) {
      if (taken == quota) break;
      candidate[entry.second] = 1;
      ++taken;
    }
    if (taken < quota) {
      std::vector<char> positive(rows, 0);
      for (const auto& entry : list) positive[entry.second] = 1;
      for (std::size_t r = 0; r < rows && taken < quota; ++r) {
        if (positive[r]) continue;
        candidate[r] = 1;
        ++taken;
      }
    }
  }
  std::vector<std::uint32_t> cand_rows;
  std::vector<int> cand_pos(rows, -1);
  for (std::size_t r = 0; r < rows; ++r) {
    if (candidate[r]) {
      cand_pos[r] = static_cast<int>(cand_rows.size());
      cand_rows.push_back(static_cast<std::uint32_t>(r));
    }
  }

  WeightMatrix weights(cand_rows.size(), cols, 0.0);
  for (const auto& [key, n] : inter) {
    if (cand_pos[key.first] >= 0) {
      weights(static_cast<std::size_t>(cand_pos[key.first]), key.second) =
          pair_iou(key.first, key.second, n);
    }
  }
  const std::vector<int> assignment = max_weight_assignment(weights);

  std::vector<int> row_of_col(cols, -1);
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] >= 0) row_of_col[static_cast<std::size_t>(assignment[i])] = static_cast<int>(cand_rows[i]);
  }
  std::vector<char> row_matched(rows, 0);
  std::vector<double> values;
  for (std::size_t c = 0; c < cols; ++c) {
    if (row_of_col[c] < 0) {
      report.unmatched_truth.push_back(tru.ids[c]);
      continue;
    }
    const auto r = static_cast<std::size_t>(row_of_col[c]);
    const double value = weights(static_cast<std::size_t>(cand_pos[r]), c);
    row_matched[r] = 1;
    report.pairs.push_back({pred.ids[r], tru.ids[c], value});
    values.push_back(value);
    report.iou_sum += value;
  }
  for (std::size_t r = 0; r < rows; ++r) {
    if (!row_matched[r]) report.unmatched_predicted.push_back(pred.ids[r]);
  }
  if (!values.empty()) report.mean_iou = report.iou_sum / static_cast<double>(values.size());
  report.median_iou = median_of(std::move(values));
  return report;
}

CountReport count_report(const Labeling& labeling, const Labeling& truth) {
  require_same_length(labeling, truth);
  // Per predicted cluster: first plant label seen, and whether a second
  // distinct plant label appeared.
  struct Seen {
    std::uint32_t plant = 0;
    bool multi = false;
  };
  std::map<std::uint32_t, Seen> clusters;
  std::vector<std::uint32_t> plants;
  for (std::size_t i = 0; i < labeling.size(); ++i) {
    Seen& s = clusters[labeling[i]];
    const std::uint32_t t = truth[i];
    if (t == 0) continue;
    plants.push_back(t);
    if (s.plant == 0) {
      s.plant = t;
    } else if (s.plant != t) {
      s.multi = true;
    }
  }
  std::sort(plants.begin(), plants.end());
  plants.erase(std::unique(plants.begin(), plants.end()), plants.end());

  CountReport report;
  report.total_clusters = clusters.size();
  report.total_plants = plants.size();
  for (const auto& [id, s] : clusters) {
    if (s.multi) ++report.multi_plant_clusters;
    if (s.plant == 0) ++report.extraneous_clusters;
  }
  return report;
}

}  // namespace cropclust
