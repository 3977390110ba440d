#pragma once

#include <nlohmann/json.hpp>
#include <span>

#include "indeval/bounds.hpp"
#include "indeval/estimation.hpp"
#include "indeval/metrics.hpp"
#include "indeval/simulator.hpp"

namespace indeval {

// JSON views of the result types. Keys are the field names; optional fields
// that are absent are omitted.

[[nodiscard]] nlohmann::ordered_json to_json(const EvaluationReport& report);
/// {"method", "lower", "upper", "assumptions"}
[[nodiscard]] nlohmann::ordered_json to_json(const PerformanceInterval& interval);
[[nodiscard]] nlohmann::ordered_json to_json(const PrevalenceEstimate& estimate);
[[nodiscard]] nlohmann::ordered_json to_json(std::span<const SweepSummaryPoint> summary);

}  // namespace indeval
