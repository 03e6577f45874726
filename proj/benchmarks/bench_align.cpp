#include <benchmark/benchmark.h>

#include "xlner/align.hpp"
#include "xlner/synth.hpp"

namespace {

using namespace xlner;

SynthData benchmark_data(int vocab, int dim) {
  SynthConfig config;
  config.vocab_size = vocab;
  config.dim = dim;
  config.identical_fraction = 0.3;
  config.noise = 0.1;
  config.source_sentences = 0;
  config.target_labeled = 0;
  config.target_unlabeled = 0;
  return generate_synthetic_bilingual(config, 7);
}

void BM_SolveProcrustes(benchmark::State& state) {
  SynthData data = benchmark_data(static_cast<int>(state.range(0)), 64);
  SeedDictionary dictionary =
      build_seed_dictionary(data.source_embeddings, data.target_embeddings);
  for (auto _ : state) {
    OrthogonalMapping mapping =
        solve_procrustes(dictionary, data.source_embeddings, data.target_embeddings);
    benchmark::DoNotOptimize(mapping.residual);
  }
}
BENCHMARK(BM_SolveProcrustes)->Arg(500)->Arg(2000);

void BM_BuildTranslationTable(benchmark::State& state) {
  SynthData data = benchmark_data(static_cast<int>(state.range(0)), 32);
  SeedDictionary dictionary =
      build_seed_dictionary(data.source_embeddings, data.target_embeddings);
  OrthogonalMapping mapping =
      solve_procrustes(dictionary, data.source_embeddings, data.target_embeddings);
  for (auto _ : state) {
    TranslationTable table =
        build_translation_table(mapping, data.source_embeddings, data.target_embeddings, 10);
    benchmark::DoNotOptimize(table.entries.size());
  }
}
BENCHMARK(BM_BuildTranslationTable)->Arg(500)->Arg(2000);

}  // namespace
