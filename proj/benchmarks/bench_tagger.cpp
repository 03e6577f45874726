#include <benchmark/benchmark.h>

#include "xlner/synth.hpp"
#include "xlner/tagger.hpp"

namespace {

using namespace xlner;

struct TaggerBench {
  SynthData data;
  EncoderConfig encoder;
  EmbeddingSource source;

  TaggerBench() {
    SynthConfig config;
    config.vocab_size = 400;
    config.source_sentences = 200;
    config.target_labeled = 0;
    config.target_unlabeled = 0;
    data = generate_synthetic_bilingual(config, 3);
    encoder.window = 1;
    encoder.hidden_dim = 32;
    encoder.embedding_dim = data.source_embeddings.dim;
    source = EmbeddingSource{&data.source_embeddings, nullptr};
  }
};

void BM_TrainEpoch(benchmark::State& state) {
  TaggerBench bench;
  Dataset dataset;
  dataset.add_corpus(bench.data.source_train, bench.source);
  TrainConfig config;
  config.epochs = 1;
  config.batch_size = 32;
  for (auto _ : state) {
    TaggerModel model = train_fresh(dataset, bench.encoder, bench.data.label_set, config);
    benchmark::DoNotOptimize(model.class_bias(0));
  }
}
BENCHMARK(BM_TrainEpoch);

void BM_PredictProba(benchmark::State& state) {
  TaggerBench bench;
  TaggerModel model = init_model(bench.encoder, bench.data.label_set, 1);
  const auto& sentence = bench.data.source_train.front();
  for (auto _ : state) {
    Eigen::MatrixXd proba = predict_proba(sentence.tokens, model, bench.source);
    benchmark::DoNotOptimize(proba(0, 0));
  }
}
BENCHMARK(BM_PredictProba);

void BM_ViterbiDecode(benchmark::State& state) {
  LabelSet labels = LabelSet::default_conll();
  const int length = static_cast<int>(state.range(0));
  Rng rng(5);
  Eigen::MatrixXd rows(length, 9);
  for (int i = 0; i < length; ++i) {
    double sum = 0.0;
    for (int c = 0; c < 9; ++c) {
      rows(i, c) = 0.01 + rng.uniform();
      sum += rows(i, c);
    }
    rows.row(i) /= sum;
  }
  for (auto _ : state) {
    std::vector<int> decoded = viterbi_decode(rows, labels);
    benchmark::DoNotOptimize(decoded.back());
  }
}
BENCHMARK(BM_ViterbiDecode)->Arg(16)->Arg(128);

}  // namespace
