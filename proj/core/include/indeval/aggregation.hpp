#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "indeval/corpus.hpp"

namespace indeval {

/// The aggregate human rating for one item.
struct GoldLabel {
  Label label;
  double support = 0.0;      // modal count / number of ratings
  bool tie_broken = false;   // another label had the same modal count
  std::size_t modal_count = 0;
  std::size_t n_ratings = 0;

  friend bool operator==(const GoldLabel&, const GoldLabel&) = default;
};

/// Empirical rating distribution, in alphabet order, zero-count labels omitted.
struct SoftLabel {
  std::vector<std::pair<Label, double>> distribution;

  /// Probability mass on `label` (0 if absent).
  [[nodiscard]] double at(const Label& label) const;

  friend bool operator==(const SoftLabel&, const SoftLabel&) = default;
};

/// Plurality vote with equal rater weights. Ties go to the label that comes
/// first in `alphabet`, so the result does not depend on rating order.
/// Throws std::invalid_argument on empty ratings and DataError on a response
/// outside the alphabet.
[[nodiscard]] GoldLabel plurality_gold_label(std::span<const RatingRecord> ratings,
                                             const LabelAlphabet& alphabet);

[[nodiscard]] SoftLabel soft_label(std::span<const RatingRecord> ratings,
                                   const LabelAlphabet& alphabet);

}  // namespace indeval
