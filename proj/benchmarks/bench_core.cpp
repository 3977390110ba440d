#include <benchmark/benchmark.h>

#include <vector>

#include "indeval/bounds.hpp"
#include "indeval/corpus_io.hpp"
#include "indeval/estimation.hpp"
#include "indeval/metrics.hpp"
#include "indeval/simulator.hpp"

namespace {

indeval::SimulationConfig config_for(std::size_t n_items) {
  indeval::SimulationConfig config;
  config.n_items = n_items;
  config.pi = 0.4;
  config.seed = 1;
  return config;
}

void BM_SimulateCorpus(benchmark::State& state) {
  const auto config = config_for(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(indeval::simulate_corpus(config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateCorpus)->Arg(2000)->Arg(20000);

void BM_Evaluate(benchmark::State& state) {
  const auto corpus = indeval::simulate_corpus(config_for(static_cast<std::size_t>(state.range(0)))).corpus;
  for (auto _ : state) benchmark::DoNotOptimize(indeval::evaluate(corpus));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Evaluate)->Arg(2000)->Arg(20000);

void BM_Bounds(benchmark::State& state) {
  const auto corpus = indeval::simulate_corpus(config_for(2000)).corpus;
  for (auto _ : state) {
    const auto partition = indeval::threshold_partition(corpus, 0.7, indeval::AgreementSource::raters);
    benchmark::DoNotOptimize(indeval::partition_interval(corpus, partition));
    benchmark::DoNotOptimize(indeval::prevalence_interval(corpus, 0.4));
  }
}
BENCHMARK(BM_Bounds);

void BM_CorpusRoundTrip(benchmark::State& state) {
  const auto corpus = indeval::simulate_corpus(config_for(2000)).corpus;
  for (auto _ : state) benchmark::DoNotOptimize(indeval::parse_corpus(indeval::write_corpus(corpus)));
}
BENCHMARK(BM_CorpusRoundTrip);

void BM_ClopperPearsonUpper(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(indeval::clopper_pearson_upper(n / 3, n, 0.05));
}
BENCHMARK(BM_ClopperPearsonUpper)->Arg(50)->Arg(1000);

void BM_Sweep(benchmark::State& state) {
  const std::vector<double> grid = {0.0, 0.2, 0.4, 0.6, 0.8};
  auto config = config_for(2000);
  config.rater_error = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(indeval::sweep_indeterminacy(config, grid, 4, 0.7));
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
