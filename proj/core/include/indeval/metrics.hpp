#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "indeval/corpus.hpp"

namespace indeval {

// Both metrics are exact corpus frequencies: integer counts divided once by N.
//
//   gold concurrence  M  = #{items : llm_response == plurality gold label} / N
//   true performance  M* = #{items : llm_response in VRS} / N

struct ItemCorrectness {
  std::string item_id;
  bool matched_gold = false;
  std::optional<bool> in_vrs;

  friend bool operator==(const ItemCorrectness&, const ItemCorrectness&) = default;
};

struct EvaluationReport {
  std::size_t n_items = 0;
  double gold_concurrence = 0.0;
  std::optional<double> true_performance;
  std::optional<double> gap;  // true_performance - gold_concurrence
  double mean_agreement = 0.0;
  /// Items known to be indeterminate: |vrs| >= 2 where a VRS is present,
  /// otherwise the audit flag.
  std::size_t n_indeterminate_known = 0;

  friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

/// Throws DataError naming the first item without ratings, or on an empty corpus.
[[nodiscard]] double gold_concurrence(const Corpus& corpus);

/// Throws DataError naming the first item without a VRS, or on an empty corpus.
[[nodiscard]] double true_performance(const Corpus& corpus);

/// One entry per item, in corpus order. Requires ratings on every item.
[[nodiscard]] std::vector<ItemCorrectness> per_item_correctness(const Corpus& corpus);

/// true_performance and gap are filled only when every item carries a VRS.
[[nodiscard]] EvaluationReport evaluate(const Corpus& corpus);

}  // namespace indeval
