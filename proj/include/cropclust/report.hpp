#pragma once

#include <string>

#include "json.hpp"

#include "cropclust/eval.hpp"

namespace cropclust {

inline constexpr int kReportSchema = 1;

nlohmann::json to_json(const MatchReport& report);
nlohmann::json to_json(const CountReport& report);

// {"schema": 1, "match": {...}, "counts": {...}}; keys sorted, so the text
// is byte-identical for identical inputs.
nlohmann::json eval_report(const MatchReport& match, const CountReport& counts);

}  // namespace cropclust
