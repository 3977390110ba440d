#include "indeval/serialize.hpp"

namespace indeval {

using nlohmann::ordered_json;

ordered_json to_json(const EvaluationReport& report) {
  ordered_json j;
  j["n_items"] = report.n_items;
  j["gold_concurrence"] = report.gold_concurrence;
  if (report.true_performance) j["true_performance"] = *report.true_performance;
  if (report.gap) j["gap"] = *report.gap;
  j["mean_agreement"] = report.mean_agreement;
  j["n_indeterminate_known"] = report.n_indeterminate_known;
  return j;
}

ordered_json to_json(const PerformanceInterval& interval) {
  ordered_json j;
  j["method"] = std::string(to_string(interval.method()));
  j["lower"] = interval.lower();
  j["upper"] = interval.upper();
  j["assumptions"] = interval.assumptions();
  return j;
}

ordered_json to_json(const PrevalenceEstimate& estimate) {
  ordered_json j;
  j["n_audited"] = estimate.n_audited;
  j["n_indeterminate"] = estimate.n_indeterminate;
  j["point"] = estimate.point;
  j["upper_confidence"] = estimate.upper_confidence;
  j["alpha"] = estimate.alpha;
  return j;
}

ordered_json to_json(std::span<const SweepSummaryPoint> summary) {
  ordered_json points = ordered_json::array();
  for (const auto& s : summary) {
    ordered_json p;
    p["pi"] = s.pi;
    p["rows"] = s.rows;
    p["mean_gap"] = s.mean_gap;
    p["mean_prevalence_width"] = s.mean_prevalence_width;
    p["mean_partition_width"] = s.mean_partition_width;
    p["mean_heuristic_width"] = s.mean_heuristic_width;
    points.push_back(std::move(p));
  }
  ordered_json j;
  j["summary"] = std::move(points);
  return j;
}

}  // namespace indeval
