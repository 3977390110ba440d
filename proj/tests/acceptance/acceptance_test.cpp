// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli/cli.hpp"
#include "indeval/bounds.hpp"
#include "indeval/corpus_io.hpp"
#include "indeval/estimation.hpp"
#include "indeval/metrics.hpp"
#include "indeval/simulator.hpp"
#include "oracle/generators.hpp"
#include "oracle/oracle.hpp"

namespace {

using namespace indeval;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << "AC" << id << "  " << detail << '\n';
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    for (std::size_t t = i; t <= j; ++t) r[order[t]] = (static_cast<double>(i + j) / 2.0) + 1.0;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += rx[i], my += ry[i];
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

const std::vector<double> kGrid = {0.0, 0.2, 0.4, 0.6, 0.8};

SimulationConfig sweep_defaults() {
  SimulationConfig config;
  config.n_items = 2000;
  config.alphabet_size = 4;
  config.raters_per_item = 5;
  config.rater_error = 0.0;
  config.llm_competence = 0.8;
  config.vrs_max = 3;
  config.dirichlet_alpha = 1.0;
  config.seed = 20240601;
  return config;
}

void sweep_criteria() {
  const auto start = Clock::now();
  const auto table = sweep_indeterminacy(sweep_defaults(), kGrid, 20, 0.7, std::max(1u, std::thread::hardware_concurrency()));
  const double runtime = seconds_since(start);
  const auto summary = summarize_sweep(table);

  // 1: underestimation grows with indeterminacy.
  std::vector<double> pis, gaps;
  bool nonneg = true, increasing = true;
  for (std::size_t i = 0; i < summary.size(); ++i) {
    pis.push_back(summary[i].pi);
    gaps.push_back(summary[i].mean_gap);
    nonneg = nonneg && summary[i].mean_gap >= 0.0;
    if (i > 0) increasing = increasing && summary[i].mean_gap > summary[i - 1].mean_gap;
  }
  const double rho = spearman(pis, gaps);
  std::string gap_text;
  for (double g : gaps) gap_text += (gap_text.empty() ? "" : ",") + fmt(g);
  report(1, nonneg && increasing && rho == 1.0 && runtime <= 30.0,
         "mean gap by pi [" + gap_text + "] spearman=" + fmt(rho) + " runtime=" + fmt(runtime, 3) + "s");

  // 2: both intervals contain true performance on every row.
  std::size_t prev_ok = 0, part_ok = 0;
  for (const auto& row : table.rows) {
    prev_ok += row.prev_lower <= row.true_performance && row.true_performance <= row.prev_upper;
    part_ok += row.part_lower <= row.true_performance && row.true_performance <= row.part_upper;
  }
  const auto n_rows = table.rows.size();
  report(2, prev_ok == n_rows && part_ok == n_rows,
         "prevalence " + std::to_string(prev_ok) + "/" + std::to_string(n_rows) + ", partition " +
             std::to_string(part_ok) + "/" + std::to_string(n_rows) + " rows contain true performance");

  // 3: partition narrower than prevalence; at pi >= 0.4 by at least a factor 0.8 on average.
  std::size_t row_violations = 0;
  for (const auto& row : table.rows) {
    if (row.pi > 0.0 && row.part_upper - row.part_lower > row.prev_upper - row.prev_lower) ++row_violations;
  }
  bool ratio_ok = true;
  double pooled_part = 0, pooled_prev = 0;
  std::string ratio_text;
  for (const auto& point : summary) {
    if (point.pi < 0.4) continue;
    const double ratio = point.mean_partition_width / point.mean_prevalence_width;
    ratio_ok = ratio_ok && point.mean_partition_width <= 0.8 * point.mean_prevalence_width;
    pooled_part += point.mean_partition_width;
    pooled_prev += point.mean_prevalence_width;
    ratio_text += (ratio_text.empty() ? "" : ",") + fmt(point.pi, 2) + ":" + fmt(ratio);
  }
  report(3, row_violations == 0 && ratio_ok,
         "rows with partition wider than prevalence=" + std::to_string(row_violations) +
             "; partition/prevalence width ratio at pi>=0.4 [" + ratio_text + "] pooled=" +
             fmt(pooled_part / pooled_prev) + " (limit 0.8)");
}

void collapse_criterion() {
  auto config = sweep_defaults();
  bool ok = true;
  std::size_t corpora = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    config.pi = 0.0;
    config.seed = seed;
    const auto sim = simulate_corpus(config);
    const double m = gold_concurrence(sim.corpus);
    const double m_star = true_performance(sim.corpus);
    const auto prev = prevalence_interval(sim.corpus, 0.0);
    const auto part = partition_interval(sim.corpus, oracle_partition(sim.corpus));
    const auto heur = partition_interval(sim.corpus, threshold_partition(sim.corpus, 0.7, AgreementSource::raters));
    const auto mixed = mixed_interval(sim.corpus, oracle_partition(sim.corpus));
    ok = ok && m == m_star;
    for (const auto* iv : {&prev, &part, &heur, &mixed}) {
      ok = ok && iv->lower() == iv->upper() && iv->lower() == m;
    }
    ++corpora;
  }
  const auto table = sweep_indeterminacy(sweep_defaults(), std::vector<double>{0.0}, 5, 0.7, std::max(1u, std::thread::hardware_concurrency()));
  for (const auto& row : table.rows) {
    ok = ok && row.gold_concurrence == row.true_performance && row.prev_lower == row.prev_upper &&
         row.part_lower == row.part_upper && row.heur_lower == row.heur_upper;
  }
  report(4, ok, std::to_string(corpora) + " corpora and " + std::to_string(table.rows.size()) +
                    " sweep rows at pi=0: M == M* and every interval is a point");
}

void oracle_criterion() {
  const auto start = Clock::now();
  std::mt19937_64 rng(5);
  testing::RandomCorpusSpec spec;
  spec.max_items = 4;
  spec.max_labels = 3;
  spec.gold_in_vrs = true;
  std::size_t mismatches = 0, checks = 0;
  auto expect = [&](bool cond) {
    ++checks;
    if (!cond) ++mismatches;
  };
  for (int trial = 0; trial < 500; ++trial) {
    const auto corpus = testing::random_corpus(rng, spec);
    const std::size_t n = corpus.size();
    const double dn = static_cast<double>(n);
    expect(gold_concurrence(corpus) == oracle::count_gold_matches(corpus) / dn);
    expect(true_performance(corpus) == oracle::count_in_vrs(corpus) / dn);

    for (std::size_t k = 0; k <= n; ++k) {
      const auto iv = prevalence_interval(corpus, static_cast<double>(k) / dn);
      const auto range = oracle::enumerate_true_performance(corpus, {.max_indeterminate = k});
      expect(iv.lower() == range.min_correct / dn && iv.upper() == range.max_correct / dn);
    }

    std::vector<Partition> partitions = {oracle_partition(corpus)};
    Partition random_split;
    for (const auto& item : corpus.items) {
      (rng() & 1 ? random_split.indeterminate_ids : random_split.determinate_ids).insert(item.item_id);
    }
    partitions.push_back(random_split);
    for (const auto& p : partitions) {
      std::vector<bool> side;
      for (const auto& item : corpus.items) side.push_back(p.indeterminate_ids.contains(item.item_id));
      const auto iv = partition_interval(corpus, p);
      const auto range = oracle::enumerate_true_performance(corpus, {.indeterminate_side = side});
      expect(iv.lower() == range.min_correct / dn && iv.upper() == range.max_correct / dn);
    }
  }
  const double runtime = seconds_since(start);
  report(5, mismatches == 0 && runtime <= 10.0,
         "500 corpora, " + std::to_string(checks) + " exact comparisons against exhaustive enumeration, " +
             std::to_string(mismatches) + " mismatches, runtime=" + fmt(runtime, 3) + "s");
}

void estimator_criterion() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (std::size_t n : {5u, 20u, 100u}) {
    const double closed = 1.0 - std::pow(0.05, 1.0 / static_cast<double>(n));
    worst = std::max(worst, std::abs(clopper_pearson_upper(0, n, 0.05) - closed));
  }
  std::mt19937_64 rng(2024);
  std::binomial_distribution<std::size_t> draw(50, 0.3);
  std::size_t covered = 0;
  const std::size_t trials = 2000;
  for (std::size_t t = 0; t < trials; ++t) {
    covered += clopper_pearson_upper(draw(rng), 50, 0.05) >= 0.3;
  }
  const double coverage = static_cast<double>(covered) / trials;
  const double runtime = seconds_since(start);
  report(6, worst <= 1e-6 && coverage >= 0.93 && runtime <= 10.0,
         "max |CP - closed form| at k=0: " + fmt(worst, 3) + "; coverage " + fmt(coverage) +
             " over 2000 trials; runtime=" + fmt(runtime, 3) + "s");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism_criterion() {
  const auto dir = fs::temp_directory_path() / "indeval-acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto invoke = [&](std::vector<std::string> args, const std::string& out, const std::string& threads) {
    args.insert(args.end(), {"--out", (dir / out).string(), "--threads", threads});
    std::ostringstream o, e;
    const int code = cli::run(args, o, e);
    return code == 0 ? slurp(dir / out) + "\n--stdout--\n" + o.str() : std::string("exit ") + std::to_string(code) + e.str();
  };
  const std::vector<std::string> sim = {"simulate", "--items", "3000", "--pi", "0.5", "--seed", "9"};
  const std::vector<std::string> sweep = {"sweep", "--pi-grid", "0:0.8:0.2", "--replicates", "4",
                                          "--items", "500", "--seed", "9"};
  const auto s1 = invoke(sim, "s1.jsonl", "1");
  const auto s2 = invoke(sim, "s2.jsonl", "1");
  const auto s8 = invoke(sim, "s8.jsonl", "8");
  const auto w1 = invoke(sweep, "w1.csv", "1");
  const auto w2 = invoke(sweep, "w2.csv", "1");
  const auto w8 = invoke(sweep, "w8.csv", "8");
  fs::remove_all(dir);
  const bool ok = s1.rfind("exit", 0) != 0 && w1.rfind("exit", 0) != 0 && s1 == s2 && s1 == s8 &&
                  w1 == w2 && w1 == w8;
  report(7, ok, "simulate (" + std::to_string(s1.size()) + " bytes) and sweep (" + std::to_string(w1.size()) +
                    " bytes) identical across repeat runs and 1 vs 8 threads");
}

void roundtrip_criterion() {
  std::mt19937_64 rng(77);
  std::size_t identical = 0;
  const std::size_t total = 100;
  for (std::size_t t = 0; t < total; ++t) {
    SimulationConfig config;
    config.n_items = 1 + rng() % 60;
    config.alphabet_size = 3 + rng() % 4;
    config.vrs_max = 2 + rng() % (config.alphabet_size - 1);
    config.pi = static_cast<double>(rng() % 11) / 10.0;
    config.raters_per_item = 1 + rng() % 6;
    config.rater_error = 0.1;
    config.seed = rng();
    auto corpus = simulate_corpus(config).corpus;
    for (auto& item : corpus.items) {
      const auto bits = rng();
      if (bits & 1) item.vrs.reset();
      if (bits & 2) item.instruction = "Instruction for " + item.item_id + " \"quoted\" é";
      if (bits & 4) item.llm_samples = std::vector<Label>{item.llm_response, corpus.alphabet[0]};
      if (bits & 8) item.indeterminate_flag = (bits & 16) != 0;
    }
    const auto text = write_corpus(corpus);
    const auto parsed = parse_corpus(text);
    identical += parsed == corpus && write_corpus(parsed) == text;
  }
  report(8, identical == total,
         std::to_string(identical) + "/" + std::to_string(total) + " corpora round-trip to an identical value");
}

void guarded(int id, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, std::string("threw: ") + e.what());
  }
}

}  // namespace

int main() {
  guarded(1, sweep_criteria);
  guarded(4, collapse_criterion);
  guarded(5, oracle_criterion);
  guarded(6, estimator_criterion);
  guarded(7, determinism_criterion);
  guarded(8, roundtrip_criterion);
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criterion(s) failed")
            << '\n';
  return failures == 0 ? 0 : 1;
}
