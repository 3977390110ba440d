#include "indeval/metrics.hpp"

#include <algorithm>

#include "indeval/aggregation.hpp"
#include "indeval/error.hpp"

namespace indeval {
namespace {

void require_items(const Corpus& corpus) {
  if (corpus.items.empty()) throw DataError("corpus has no items");
}

bool matches_gold(const Item& item, const LabelAlphabet& alphabet) {
  if (item.ratings.empty()) {
    throw DataError("item '" + item.item_id + "' has no ratings");
  }
  return plurality_gold_label(item.ratings, alphabet).label == item.llm_response;
}

double fraction(std::size_t count, std::size_t total) {
  return static_cast<double>(count) / static_cast<double>(total);
}

}  // namespace

double gold_concurrence(const Corpus& corpus) {
  require_items(corpus);
  std::size_t matched = 0;
  for (const auto& item : corpus.items) matched += matches_gold(item, corpus.alphabet);
  return fraction(matched, corpus.size());
}

double true_performance(const Corpus& corpus) {
  require_items(corpus);
  std::size_t correct = 0;
  for (const auto& item : corpus.items) {
    if (!item.vrs) {
      throw DataError("item '" + item.item_id +
                      "' has no vrs; true performance needs a VRS on every item "
                      "(use a performance interval instead)");
    }
    correct += item.vrs->contains(item.llm_response);
  }
  return fraction(correct, corpus.size());
}

std::vector<ItemCorrectness> per_item_correctness(const Corpus& corpus) {
  std::vector<ItemCorrectness> out;
  out.reserve(corpus.size());
  for (const auto& item : corpus.items) {
    std::optional<bool> in_vrs;
    if (item.vrs) in_vrs = item.vrs->contains(item.llm_response);
    out.push_back({item.item_id, matches_gold(item, corpus.alphabet), in_vrs});
  }
  return out;
}

EvaluationReport evaluate(const Corpus& corpus) {
  require_items(corpus);
  EvaluationReport report;
  report.n_items = corpus.size();

  std::size_t matched = 0;
  std::size_t in_vrs = 0;
  bool all_vrs = true;
  double agreement_sum = 0.0;
  for (const auto& item : corpus.items) {
    matched += matches_gold(item, corpus.alphabet);
    agreement_sum += agreement_score(std::span<const RatingRecord>(item.ratings));
    if (item.vrs) {
      in_vrs += item.vrs->contains(item.llm_response);
      report.n_indeterminate_known += item.vrs->is_indeterminate();
    } else {
      all_vrs = false;
      report.n_indeterminate_known += item.indeterminate_flag.value_or(false);
    }
  }
  report.gold_concurrence = fraction(matched, report.n_items);
  report.mean_agreement = agreement_sum / static_cast<double>(report.n_items);
  if (all_vrs) {
    report.true_performance = fraction(in_vrs, report.n_items);
    report.gap = *report.true_performance - report.gold_concurrence;
  }
  return report;
}

}  // namespace indeval
