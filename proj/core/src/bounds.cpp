#include "indeval/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "indeval/aggregation.hpp"
#include "indeval/error.hpp"

namespace indeval {
namespace {

std::vector<std::string> tags(std::initializer_list<std::string_view> list) {
  return {list.begin(), list.end()};
}

std::vector<bool> gold_matches(const Corpus& corpus) {
  if (corpus.items.empty()) throw DataError("corpus has no items");
  std::vector<bool> out;
  out.reserve(corpus.size());
  for (const auto& item : corpus.items) {
    if (item.ratings.empty()) throw DataError("item '" + item.item_id + "' has no ratings");
    out.push_back(plurality_gold_label(item.ratings, corpus.alphabet).label == item.llm_response);
  }
  return out;
}

// For each item in corpus order: true when on the indeterminate side.
std::vector<bool> resolve_partition(const Corpus& corpus, const Partition& partition) {
  for (const auto& id : partition.determinate_ids) {
    if (partition.indeterminate_ids.contains(id)) {
      throw DataError("partition places item '" + id + "' on both sides");
    }
  }
  std::vector<bool> indeterminate;
  indeterminate.reserve(corpus.size());
  for (const auto& item : corpus.items) {
    const bool in_d = partition.determinate_ids.contains(item.item_id);
    const bool in_i = partition.indeterminate_ids.contains(item.item_id);
    if (!in_d && !in_i) {
      throw DataError("partition does not cover item '" + item.item_id + "'");
    }
    indeterminate.push_back(in_i);
  }
  if (corpus.size() != partition.determinate_ids.size() + partition.indeterminate_ids.size()) {
    for (const auto* side : {&partition.determinate_ids, &partition.indeterminate_ids}) {
      for (const auto& id : *side) {
        if (!corpus.find(id)) throw DataError("partition names unknown item '" + id + "'");
      }
    }
  }
  return indeterminate;
}

double ratio(std::size_t count, std::size_t total) {
  return static_cast<double>(count) / static_cast<double>(total);
}

}  // namespace

std::string_view to_string(IntervalMethod method) noexcept {
  switch (method) {
    case IntervalMethod::prevalence: return "prevalence";
    case IntervalMethod::partition: return "partition";
    case IntervalMethod::mixed: return "mixed";
  }
  return "unknown";
}

PerformanceInterval::PerformanceInterval(double lower, double upper, IntervalMethod method,
                                         std::vector<std::string> assumptions)
    : lower_(lower), upper_(upper), method_(method), assumptions_(std::move(assumptions)) {
  if (!(0.0 <= lower_ && lower_ <= upper_ && upper_ <= 1.0)) {
    throw std::invalid_argument("invalid performance interval [" + std::to_string(lower_) + ", " +
                                std::to_string(upper_) + "]");
  }
}

PerformanceInterval prevalence_interval(const Corpus& corpus, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("prevalence p must lie in [0, 1], got " + std::to_string(p));
  }
  const auto matches = gold_matches(corpus);
  const std::size_t n = corpus.size();
  const auto matched = static_cast<std::size_t>(std::count(matches.begin(), matches.end(), true));

  double extra = p * static_cast<double>(n);
  if (const double nearest = std::round(extra); std::abs(extra - nearest) <= 1e-9) {
    extra = nearest;
  }
  const double lower = ratio(matched, n);
  const double upper = std::min(1.0, (static_cast<double>(matched) + extra) / static_cast<double>(n));
  return {lower, upper, IntervalMethod::prevalence, tags({assumptions::kGoldInVrs})};
}

PerformanceInterval partition_interval(const Corpus& corpus, const Partition& partition) {
  const auto matches = gold_matches(corpus);
  const auto indeterminate = resolve_partition(corpus, partition);
  std::size_t lower = 0;
  std::size_t upper = 0;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    lower += matches[i];
    upper += indeterminate[i] ? 1 : matches[i];
  }
  const auto n = corpus.size();
  return {ratio(lower, n), ratio(upper, n), IntervalMethod::partition,
          tags({assumptions::kGoldInVrs, assumptions::kPartitionSuperset})};
}

PerformanceInterval mixed_interval(const Corpus& corpus, const Partition& partition) {
  const auto matches = gold_matches(corpus);
  const auto indeterminate = resolve_partition(corpus, partition);
  std::size_t lower = 0;
  std::size_t upper = 0;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    const auto& item = corpus.items[i];
    if (item.vrs) {
      const bool correct = item.vrs->contains(item.llm_response);
      lower += correct;
      upper += correct;
    } else {
      lower += matches[i];
      upper += indeterminate[i] ? 1 : matches[i];
    }
  }
  const auto n = corpus.size();
  return {ratio(lower, n), ratio(upper, n), IntervalMethod::mixed,
          tags({assumptions::kGoldInVrs, assumptions::kPartitionSuperset})};
}

Partition threshold_partition(const Corpus& corpus, double tau, AgreementSource source) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("agreement threshold tau must lie in [0, 1], got " +
                                std::to_string(tau));
  }
  Partition out;
  for (const auto& item : corpus.items) {
    double score = 0.0;
    if (source == AgreementSource::raters) {
      if (item.ratings.empty()) throw DataError("item '" + item.item_id + "' has no ratings");
      score = agreement_score(std::span<const RatingRecord>(item.ratings));
    } else {
      if (!item.llm_samples || item.llm_samples->empty()) {
        throw DataError("item '" + item.item_id + "' has no llm_samples");
      }
      score = agreement_score(std::span<const Label>(*item.llm_samples));
    }
    (score < tau ? out.indeterminate_ids : out.determinate_ids).insert(item.item_id);
  }
  return out;
}

Partition oracle_partition(const Corpus& corpus) {
  Partition out;
  for (const auto& item : corpus.items) {
    if (!item.vrs) throw DataError("item '" + item.item_id + "' has no vrs");
    (item.vrs->is_indeterminate() ? out.indeterminate_ids : out.determinate_ids)
        .insert(item.item_id);
  }
  return out;
}

Partition flag_partition(const Corpus& corpus) {
  Partition out;
  for (const auto& item : corpus.items) {
    (item.indeterminate_flag.value_or(true) ? out.indeterminate_ids : out.determinate_ids)
        .insert(item.item_id);
  }
  return out;
}

double interval_width(const PerformanceInterval& interval) noexcept {
  return interval.upper() - interval.lower();
}

}  // namespace indeval
