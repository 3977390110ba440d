#include "indeval/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "indeval/bounds.hpp"
#include "indeval/metrics.hpp"
#include "parallel.hpp"

namespace indeval {
namespace {

void require(bool ok, const char* field, const std::string& rule) {
  if (!ok) throw std::invalid_argument(std::string(field) + " " + rule);
}

std::size_t weighted_pick(std::span<const double> weights, std::mt19937_64& rng) {
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return weights.size() - 1;
}

struct ItemDraw {
  std::vector<std::size_t> members;  // alphabet indices
  std::vector<double> weights;
  std::vector<std::size_t> ratings;
  std::size_t llm = 0;
};

ItemDraw draw_item(const SimulationConfig& cfg, std::uint64_t stream_seed) {
  std::mt19937_64 rng(stream_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> any_label(0, cfg.alphabet_size - 1);
  ItemDraw d;

  if (unit(rng) < cfg.pi) {
    const auto size = std::uniform_int_distribution<std::size_t>(2, cfg.vrs_max)(rng);
    std::vector<std::size_t> pool(cfg.alphabet_size);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < size; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    d.members.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));

    std::gamma_distribution<double> gamma(cfg.dirichlet_alpha, 1.0);
    d.weights.resize(size);
    double total = 0.0;
    for (auto& w : d.weights) {
      // Tiny concentrations can underflow to 0; weights must stay positive.
      w = std::max(gamma(rng), std::numeric_limits<double>::min());
      total += w;
    }
    for (auto& w : d.weights) w /= total;
  } else {
    d.members = {any_label(rng)};
    d.weights = {1.0};
  }

  auto interpret = [&] { return d.members[weighted_pick(d.weights, rng)]; };
  d.ratings.reserve(cfg.raters_per_item);
  for (std::size_t r = 0; r < cfg.raters_per_item; ++r) {
    d.ratings.push_back(unit(rng) < cfg.rater_error ? any_label(rng) : interpret());
  }
  d.llm = unit(rng) < cfg.llm_competence ? interpret() : any_label(rng);
  return d;
}

void append_double(std::string& out, double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, end);
}

}  // namespace

void SimulationConfig::validate() const {
  require(n_items >= 1, "n_items", "must be at least 1");
  require(alphabet_size >= 2, "alphabet_size", "must be at least 2");
  require(pi >= 0.0 && pi <= 1.0, "pi", "must lie in [0, 1]");
  require(vrs_max >= 2 && vrs_max <= alphabet_size, "vrs_max",
          "must lie in [2, alphabet_size]");
  require(raters_per_item >= 1, "raters_per_item", "must be at least 1");
  require(rater_error >= 0.0 && rater_error < 1.0, "rater_error", "must lie in [0, 1)");
  require(llm_competence >= 0.0 && llm_competence <= 1.0, "llm_competence",
          "must lie in [0, 1]");
  require(dirichlet_alpha > 0.0 && std::isfinite(dirichlet_alpha), "dirichlet_alpha",
          "must be a positive finite number");
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

LabelAlphabet simulated_alphabet(std::size_t k) {
  std::vector<Label> labels;
  labels.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    labels.emplace_back(k <= 26 ? std::string(1, static_cast<char>('A' + i))
                                : "L" + std::to_string(i));
  }
  return LabelAlphabet(std::move(labels));
}

SimulatedCorpus simulate_corpus(const SimulationConfig& config, unsigned threads) {
  config.validate();
  const LabelAlphabet alphabet = simulated_alphabet(config.alphabet_size);

  std::vector<ItemDraw> draws(config.n_items);
  detail::parallel_for(config.n_items, threads, [&](std::size_t i) {
    draws[i] = draw_item(config, mix_seed(config.seed, i));
  });

  std::vector<std::string> rater_ids;
  for (std::size_t r = 0; r < config.raters_per_item; ++r) {
    rater_ids.push_back("r" + std::to_string(r + 1));
  }

  SimulatedCorpus out{Corpus{alphabet, {}}, {}};
  out.corpus.items.reserve(config.n_items);
  out.truth.items.reserve(config.n_items);
  for (std::size_t i = 0; i < config.n_items; ++i) {
    const ItemDraw& d = draws[i];
    std::vector<Label> members;
    for (auto m : d.members) members.push_back(alphabet[m]);
    ValidResponseSet vrs(std::move(members));

    std::vector<RatingRecord> ratings;
    ratings.reserve(d.ratings.size());
    for (std::size_t r = 0; r < d.ratings.size(); ++r) {
      ratings.push_back({rater_ids[r], alphabet[d.ratings[r]]});
    }
    out.corpus.items.push_back(Item{"sim-" + std::to_string(i), std::nullopt, std::move(ratings),
                                    alphabet[d.llm], std::nullopt, vrs, std::nullopt});
    out.truth.items.push_back({std::move(vrs), d.weights});
  }
  return out;
}

SweepTable sweep_indeterminacy(const SimulationConfig& base, std::span<const double> pi_grid,
                               std::size_t replicates, double tau, unsigned threads) {
  if (pi_grid.empty()) throw std::invalid_argument("pi grid must be non-empty");
  if (replicates == 0) throw std::invalid_argument("replicates must be at least 1");
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in [0, 1]");
  for (double pi : pi_grid) {
    if (!(pi >= 0.0 && pi <= 1.0)) {
      throw std::invalid_argument("pi grid value " + std::to_string(pi) + " outside [0, 1]");
    }
  }
  base.validate();

  SweepTable table;
  table.rows.resize(pi_grid.size() * replicates);
  detail::parallel_for(table.rows.size(), threads, [&](std::size_t row_index) {
    const std::size_t pi_index = row_index / replicates;
    const std::size_t replicate = row_index % replicates;

    SimulationConfig cfg = base;
    cfg.pi = pi_grid[pi_index];
    cfg.seed = mix_seed(mix_seed(base.seed, pi_index), replicate);
    const auto sim = simulate_corpus(cfg, 1);
    const Corpus& corpus = sim.corpus;

    std::size_t indeterminate = 0;
    for (const auto& t : sim.truth.items) indeterminate += t.vrs.is_indeterminate();

    const auto report = evaluate(corpus);
    SweepRow& row = table.rows[row_index];
    row.pi = cfg.pi;
    row.replicate = replicate;
    row.seed = cfg.seed;
    row.n_items = corpus.size();
    row.realized_pi = static_cast<double>(indeterminate) / static_cast<double>(corpus.size());
    row.gold_concurrence = report.gold_concurrence;
    row.true_performance = report.true_performance.value();
    row.mean_agreement = report.mean_agreement;

    const auto prev = prevalence_interval(corpus, row.realized_pi);
    const auto part = partition_interval(corpus, oracle_partition(corpus));
    const auto heur =
        partition_interval(corpus, threshold_partition(corpus, tau, AgreementSource::raters));
    row.prev_lower = prev.lower();
    row.prev_upper = prev.upper();
    row.part_lower = part.lower();
    row.part_upper = part.upper();
    row.heur_lower = heur.lower();
    row.heur_upper = heur.upper();
  });
  return table;
}

std::vector<SweepSummaryPoint> summarize_sweep(const SweepTable& table) {
  std::vector<SweepSummaryPoint> out;
  for (const auto& row : table.rows) {
    if (out.empty() || out.back().pi != row.pi) out.push_back({row.pi});
    auto& s = out.back();
    ++s.rows;
    s.mean_gap += row.true_performance - row.gold_concurrence;
    s.mean_prevalence_width += row.prev_upper - row.prev_lower;
    s.mean_partition_width += row.part_upper - row.part_lower;
    s.mean_heuristic_width += row.heur_upper - row.heur_lower;
  }
  for (auto& s : out) {
    const auto n = static_cast<double>(s.rows);
    s.mean_gap /= n;
    s.mean_prevalence_width /= n;
    s.mean_partition_width /= n;
    s.mean_heuristic_width /= n;
  }
  return out;
}

void write_sweep_csv(const SweepTable& table, std::ostream& out) {
  out << "pi,replicate,seed,n_items,realized_pi,gold_concurrence,true_performance,"
         "prev_lower,prev_upper,part_lower,part_upper,heur_lower,heur_upper,mean_agreement\n";
  std::string line;
  for (const auto& r : table.rows) {
    line.clear();
    append_double(line, r.pi);
    line += ',' + std::to_string(r.replicate) + ',' + std::to_string(r.seed) + ',' +
            std::to_string(r.n_items);
    for (double v : {r.realized_pi, r.gold_concurrence, r.true_performance, r.prev_lower,
                     r.prev_upper, r.part_lower, r.part_upper, r.heur_lower, r.heur_upper,
                     r.mean_agreement}) {
      line += ',';
      append_double(line, v);
    }
    line += '\n';
    out << line;
  }
}

}  // namespace indeval
