#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "indeval/bounds.hpp"
#include "indeval/corpus.hpp"

namespace indeval {

struct PrevalenceEstimate {
  std::size_t n_audited = 0;
  std::size_t n_indeterminate = 0;
  double point = 0.0;             // n_indeterminate / n_audited
  double upper_confidence = 0.0;  // one-sided exact upper limit at 1 - alpha
  double alpha = 0.05;

  friend bool operator==(const PrevalenceEstimate&, const PrevalenceEstimate&) = default;
};

/// n distinct item ids drawn uniformly without replacement (partial
/// Fisher-Yates over corpus order). Deterministic in (seed, corpus order, n).
/// Throws std::invalid_argument unless 1 <= n <= N.
[[nodiscard]] std::vector<std::string> draw_audit_sample(const Corpus& corpus, std::size_t n,
                                                         std::uint64_t seed);

/// P(X <= k) for X ~ Binomial(n, p), summed in log space.
[[nodiscard]] double binomial_cdf(std::size_t k, std::size_t n, double p);

/// Largest p with P(X <= k | n, p) >= alpha, by bisection on binomial_cdf to
/// an absolute tolerance well below 1e-9. Returns 1 when k == n.
[[nodiscard]] double clopper_pearson_upper(std::size_t k, std::size_t n, double alpha);

/// Point estimate plus the one-sided exact upper limit, never below the point.
/// Throws std::invalid_argument on empty audits or alpha outside (0, 1).
[[nodiscard]] PrevalenceEstimate estimate_prevalence(std::span<const AuditRecord> audits,
                                                     double alpha);

/// prevalence_interval at the estimate's upper confidence limit, tagged with
/// "audit-confidence:<1 - alpha>".
[[nodiscard]] PerformanceInterval widened_prevalence_interval(const Corpus& corpus,
                                                              const PrevalenceEstimate& estimate);

}  // namespace indeval
