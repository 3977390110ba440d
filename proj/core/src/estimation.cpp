#include "indeval/estimation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace indeval {
namespace {

constexpr double kBisectionTolerance = 1e-13;

std::string shortest(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

}  // namespace

std::vector<std::string> draw_audit_sample(const Corpus& corpus, std::size_t n,
                                           std::uint64_t seed) {
  const std::size_t total = corpus.size();
  if (n == 0) throw std::invalid_argument("audit sample size must be at least 1");
  if (n > total) {
    throw std::invalid_argument("audit sample size " + std::to_string(n) +
                                " exceeds corpus size " + std::to_string(total));
  }
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, total - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(corpus.items[order[i]].item_id);
  return ids;
}

double binomial_cdf(std::size_t k, std::size_t n, double p) {
  if (k >= n) return 1.0;
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return 0.0;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_n_fact = std::lgamma(static_cast<double>(n) + 1.0);
  std::vector<double> terms;
  terms.reserve(k + 1);
  double max_term = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j <= k; ++j) {
    const auto jd = static_cast<double>(j);
    const auto rest = static_cast<double>(n - j);
    const double t = log_n_fact - std::lgamma(jd + 1.0) - std::lgamma(rest + 1.0) +
                     jd * log_p + rest * log_q;
    terms.push_back(t);
    max_term = std::max(max_term, t);
  }
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - max_term);
  return std::min(1.0, std::exp(max_term + std::log(sum)));
}

double clopper_pearson_upper(std::size_t k, std::size_t n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  if (n == 0) throw std::invalid_argument("binomial upper limit needs n >= 1");
  if (k > n) throw std::invalid_argument("successes exceed trials");
  if (k == n) return 1.0;
  // binomial_cdf(k, n, .) falls from 1 at p = 0 to 0 at p = 1.
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > kBisectionTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (binomial_cdf(k, n, mid) >= alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

PrevalenceEstimate estimate_prevalence(std::span<const AuditRecord> audits, double alpha) {
  if (audits.empty()) throw std::invalid_argument("cannot estimate prevalence from zero audits");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  PrevalenceEstimate est;
  est.alpha = alpha;
  est.n_audited = audits.size();
  est.n_indeterminate = static_cast<std::size_t>(
      std::count_if(audits.begin(), audits.end(), [](const AuditRecord& a) { return a.indeterminate; }));
  est.point = static_cast<double>(est.n_indeterminate) / static_cast<double>(est.n_audited);
  // For alpha > 1/2 the one-sided limit can fall below the point estimate.
  est.upper_confidence =
      std::max(est.point, clopper_pearson_upper(est.n_indeterminate, est.n_audited, alpha));
  return est;
}

PerformanceInterval widened_prevalence_interval(const Corpus& corpus,
                                                const PrevalenceEstimate& estimate) {
  auto base = prevalence_interval(corpus, estimate.upper_confidence);
  auto tags = base.assumptions();
  tags.push_back("audit-confidence:" + shortest(1.0 - estimate.alpha));
  return {base.lower(), base.upper(), IntervalMethod::prevalence, std::move(tags)};
}

}  // namespace indeval
