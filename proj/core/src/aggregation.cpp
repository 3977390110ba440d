#include "indeval/aggregation.hpp"

#include <stdexcept>

#include "indeval/error.hpp"

namespace indeval {
namespace {

std::vector<std::size_t> count_by_label(std::span<const RatingRecord> ratings,
                                        const LabelAlphabet& alphabet) {
  if (ratings.empty()) throw std::invalid_argument("cannot aggregate an empty set of ratings");
  std::vector<std::size_t> counts(alphabet.size(), 0);
  for (const auto& r : ratings) {
    auto idx = alphabet.index_of(r.response);
    if (!idx) {
      throw DataError("rating '" + r.response.str() + "' from rater '" + r.rater_id +
                      "' is outside the alphabet");
    }
    ++counts[*idx];
  }
  return counts;
}

}  // namespace

double SoftLabel::at(const Label& label) const {
  for (const auto& [l, p] : distribution) {
    if (l == label) return p;
  }
  return 0.0;
}

GoldLabel plurality_gold_label(std::span<const RatingRecord> ratings,
                               const LabelAlphabet& alphabet) {
  const auto counts = count_by_label(ratings, alphabet);
  std::size_t best = 0;
  std::size_t ties = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > counts[best]) {
      best = i;
      ties = 1;
    } else if (counts[i] == counts[best]) {
      ++ties;
    }
  }
  const auto n = ratings.size();
  return GoldLabel{alphabet[best], static_cast<double>(counts[best]) / static_cast<double>(n),
                   ties >= 2, counts[best], n};
}

SoftLabel soft_label(std::span<const RatingRecord> ratings, const LabelAlphabet& alphabet) {
  const auto counts = count_by_label(ratings, alphabet);
  const auto n = static_cast<double>(ratings.size());
  SoftLabel out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0) out.distribution.emplace_back(alphabet[i], static_cast<double>(counts[i]) / n);
  }
  return out;
}

}  // namespace indeval
