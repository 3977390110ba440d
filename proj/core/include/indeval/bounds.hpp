#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "indeval/corpus.hpp"

namespace indeval {

enum class IntervalMethod { prevalence, partition, mixed };

[[nodiscard]] std::string_view to_string(IntervalMethod method) noexcept;

namespace assumptions {
/// Every item's gold label is in its VRS.
inline constexpr std::string_view kGoldInVrs = "gold-in-vrs";
/// The indeterminate side of the partition contains every truly indeterminate item.
inline constexpr std::string_view kPartitionSuperset = "partition-superset";
}  // namespace assumptions

/// Interval [lower, upper] on true performance, tagged with the assumptions it
/// depends on. Construction enforces 0 <= lower <= upper <= 1.
class PerformanceInterval {
 public:
  PerformanceInterval(double lower, double upper, IntervalMethod method,
                      std::vector<std::string> assumptions);

  [[nodiscard]] double lower() const noexcept { return lower_; }
  [[nodiscard]] double upper() const noexcept { return upper_; }
  [[nodiscard]] IntervalMethod method() const noexcept { return method_; }
  [[nodiscard]] const std::vector<std::string>& assumptions() const noexcept {
    return assumptions_;
  }
  [[nodiscard]] bool contains(double value) const noexcept {
    return lower_ <= value && value <= upper_;
  }

  friend bool operator==(const PerformanceInterval&, const PerformanceInterval&) = default;

 private:
  double lower_;
  double upper_;
  IntervalMethod method_;
  std::vector<std::string> assumptions_;
};

struct Partition {
  std::set<std::string> determinate_ids;
  std::set<std::string> indeterminate_ids;

  friend bool operator==(const Partition&, const Partition&) = default;
};

enum class AgreementSource { raters, llm_samples };

/// [M, min(1, M + p)] where M is gold concurrence and p an upper estimate of
/// the indeterminate fraction. A p lying on the k/N grid is applied as the
/// integer k so the upper end is an exact count ratio.
/// Throws std::invalid_argument if p is outside [0, 1].
[[nodiscard]] PerformanceInterval prevalence_interval(const Corpus& corpus, double p);

/// [match(D) + match(I), match(D) + |I|] / N. Throws DataError if the
/// partition overlaps itself or does not cover the corpus exactly.
[[nodiscard]] PerformanceInterval partition_interval(const Corpus& corpus,
                                                     const Partition& partition);

/// Partition interval refined by known VRSs: an item with a VRS contributes
/// its exact correctness to both ends; unknown items contribute as in
/// partition_interval.
[[nodiscard]] PerformanceInterval mixed_interval(const Corpus& corpus,
                                                 const Partition& partition);

/// Items whose agreement score is strictly below tau are indeterminate.
/// Throws std::invalid_argument for tau outside [0, 1]; DataError if the
/// chosen source is empty on some item.
[[nodiscard]] Partition threshold_partition(const Corpus& corpus, double tau,
                                            AgreementSource source);

/// Partition by |vrs| >= 2. Throws DataError if an item lacks a VRS.
[[nodiscard]] Partition oracle_partition(const Corpus& corpus);

/// Partition by audit flags. Items without a flag are placed on the
/// indeterminate side, since nothing is known about them.
[[nodiscard]] Partition flag_partition(const Corpus& corpus);

[[nodiscard]] double interval_width(const PerformanceInterval& interval) noexcept;

}  // namespace indeval
