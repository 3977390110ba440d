#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "indeval/corpus.hpp"

namespace indeval {

/// Parameters of the synthetic rating process. Per item:
///   1. with probability `pi` the item is indeterminate and its VRS has a size
///      drawn uniformly from {2..vrs_max}, members uniform without replacement;
///      otherwise the VRS is a uniform singleton.
///   2. interpretation weights over VRS members ~ Dirichlet(dirichlet_alpha).
///   3. each of `raters_per_item` raters answers uniformly over the alphabet
///      with probability `rater_error`, else picks a VRS member by weight.
///   4. the model picks a VRS member by weight with probability
///      `llm_competence`, else answers uniformly over the alphabet.
struct SimulationConfig {
  std::size_t n_items = 2000;
  std::size_t alphabet_size = 4;
  double pi = 0.0;
  std::size_t vrs_max = 3;
  std::size_t raters_per_item = 5;
  double rater_error = 0.05;
  double llm_competence = 0.8;
  double dirichlet_alpha = 1.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument naming the first out-of-range field.
  void validate() const;

  friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

struct ItemTruth {
  ValidResponseSet vrs;
  std::vector<double> interpretation_weights;  // aligned with vrs.members(), sums to 1

  friend bool operator==(const ItemTruth&, const ItemTruth&) = default;
};

struct GroundTruth {
  std::vector<ItemTruth> items;

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

struct SimulatedCorpus {
  Corpus corpus;  // vrs populated, ids "sim-<index>", no instruction text
  GroundTruth truth;
};

/// Stream seed for `stream` under `seed`: splitmix64 finalizer applied to
/// seed + (stream + 1) * 0x9E3779B97F4A7C15. Item i of a corpus draws from
/// std::mt19937_64(mix_seed(config.seed, i)); sweep rows use
/// mix_seed(mix_seed(base_seed, pi_index), replicate).
[[nodiscard]] std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Labels used for an alphabet of size k: "A".."Z" for k <= 26, else "L0".."L<k-1>".
[[nodiscard]] LabelAlphabet simulated_alphabet(std::size_t k);

/// Output is identical for any `threads` value.
[[nodiscard]] SimulatedCorpus simulate_corpus(const SimulationConfig& config,
                                              unsigned threads = 1);

struct SweepRow {
  double pi = 0.0;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  std::size_t n_items = 0;
  double realized_pi = 0.0;
  double gold_concurrence = 0.0;
  double true_performance = 0.0;
  double prev_lower = 0.0;
  double prev_upper = 0.0;
  double part_lower = 0.0;  // oracle partition
  double part_upper = 0.0;
  double heur_lower = 0.0;  // rater-agreement threshold partition
  double heur_upper = 0.0;
  double mean_agreement = 0.0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepTable {
  std::vector<SweepRow> rows;  // sorted by (pi index, replicate)

  friend bool operator==(const SweepTable&, const SweepTable&) = default;
};

/// One row per (pi, replicate). Throws std::invalid_argument on an empty
/// grid, zero replicates, a grid value outside [0, 1] or tau outside [0, 1].
[[nodiscard]] SweepTable sweep_indeterminacy(const SimulationConfig& base,
                                             std::span<const double> pi_grid,
                                             std::size_t replicates, double tau,
                                             unsigned threads = 1);

struct SweepSummaryPoint {
  double pi = 0.0;
  std::size_t rows = 0;
  double mean_gap = 0.0;
  double mean_prevalence_width = 0.0;
  double mean_partition_width = 0.0;
  double mean_heuristic_width = 0.0;
};

/// Per-pi means, in grid order.
[[nodiscard]] std::vector<SweepSummaryPoint> summarize_sweep(const SweepTable& table);

/// CSV with header
/// pi,replicate,seed,n_items,realized_pi,gold_concurrence,true_performance,
/// prev_lower,prev_upper,part_lower,part_upper,heur_lower,heur_upper,mean_agreement
/// Doubles are written in shortest round-trip form.
void write_sweep_csv(const SweepTable& table, std::ostream& out);

}  // namespace indeval
