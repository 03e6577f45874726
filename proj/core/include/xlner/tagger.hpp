#ifndef XLNER_TAGGER_HPP
#define XLNER_TAGGER_HPP

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "xlner/align.hpp"
#include "xlner/common.hpp"
#include "xlner/corpus.hpp"
#include "xlner/embed.hpp"

namespace xlner {

// Resolves a token to its frozen embedding. Source-language text goes
// through the orthogonal mapping so that both languages share one feature
// space; out-of-vocabulary tokens embed to the zero vector.
struct EmbeddingSource {
  const EmbeddingTable* table = nullptr;
  const OrthogonalMapping* mapping = nullptr;  // optional

  int dim() const { return table->dim; }
  // N x d matrix; rows of OOV tokens are zero.
  Eigen::MatrixXd embed(std::span<const std::string> tokens) const;
};

struct EncoderConfig {
  int window = 1;          // context radius w, tokens each side
  int hidden_dim = 32;     // H
  double dropout_rate = 0.1;
  int embedding_dim = 0;   // d; must match the embedding source

  int feature_dim() const { return (2 * window + 1) * embedding_dim; }
  void validate() const;
};

// One affine + tanh layer over the windowed embedding concatenation,
// followed by a linear softmax classifier.
struct TaggerModel {
  EncoderConfig encoder;
  LabelSet label_set;
  Eigen::MatrixXd input_weight;  // H x F
  Eigen::VectorXd input_bias;    // H
  Eigen::MatrixXd class_weight;  // |C| x H
  Eigen::VectorXd class_bias;    // |C|

  int num_classes() const { return static_cast<int>(label_set.size()); }
  bool all_finite() const;
  bool same_shape(const TaggerModel& other) const;
};

struct TrainConfig {
  int epochs = 3;
  int batch_size = 32;
  double learning_rate = 5e-4;
  double weight_decay = 0.0;
  std::uint64_t seed = 0;
  int max_sequence_length = 128;

  void validate() const;
};

struct SequencePrediction {
  Eigen::MatrixXd probabilities;  // N x |C|
  std::vector<int> labels;        // N, BIO-valid when produced by viterbi_decode
};

// A training corpus: sentences paired with the embedding source that
// resolves their language. Mixed-language corpora carry one source per
// block of sentences.
struct Dataset {
  struct Item {
    const LabeledSentence* sentence = nullptr;
    const EmbeddingSource* embeddings = nullptr;
  };
  std::vector<Item> items;

  void add_corpus(const std::vector<LabeledSentence>& corpus, const EmbeddingSource& source);
  std::size_t size() const { return items.size(); }
};

struct TrainLog {
  std::vector<double> epoch_losses;
};

// Glorot-uniform weights, zero biases, deterministic in the seed.
TaggerModel init_model(const EncoderConfig& encoder, const LabelSet& label_set,
                       std::uint64_t seed);

// Feature rows h_i = tanh(A [e_{i-w}; ...; e_{i+w}] + c), inference mode.
Eigen::MatrixXd encode(std::span<const std::string> tokens, const TaggerModel& model,
                       const EmbeddingSource& source);

// Training-mode encoding: inverted dropout on the hidden rows, mask drawn
// from the given rng; inference needs no rescale.
Eigen::MatrixXd encode_train(std::span<const std::string> tokens, const TaggerModel& model,
                             const EmbeddingSource& source, Rng& rng);

// Row-wise softmax(W h_i + b), numerically stabilized by max-subtraction.
Eigen::MatrixXd predict_proba(std::span<const std::string> tokens, const TaggerModel& model,
                              const EmbeddingSource& source);

// Mean over sentences of mean over tokens of -log p[gold]; log-sum-exp
// formulation, no dropout.
double ce_loss(const Dataset& batch, const TaggerModel& model);

// Mini-batch gradient descent with Adam-style decoupled weight decay
// (beta1 0.9, beta2 0.999, eps 1e-8). Bit-reproducible given (data,
// config, init).
TaggerModel train(const Dataset& data, const TrainConfig& config, const TaggerModel& init,
                  TrainLog* log = nullptr);

// Fresh Glorot init from config.seed, then train.
TaggerModel train_fresh(const Dataset& data, const EncoderConfig& encoder,
                        const LabelSet& label_set, const TrainConfig& config,
                        TrainLog* log = nullptr);

// train(data, config, init) with the initial model left untouched.
TaggerModel finetune(const TaggerModel& init, const Dataset& data, const TrainConfig& config,
                     TrainLog* log = nullptr);

// Per-token argmax; ties toward the lower class id. May be BIO-invalid;
// used for voting, never for evaluation.
std::vector<int> argmax_labels(const Eigen::MatrixXd& probabilities);
std::vector<int> argmax_labels(std::span<const std::string> tokens, const TaggerModel& model,
                               const EmbeddingSource& source);

// Highest-probability BIO-valid label sequence; no trained transition
// matrix, the scheme constraints are the only transitions. Probabilities
// are clamped at 1e-12 before the log.
std::vector<int> viterbi_decode(const Eigen::MatrixXd& probabilities,
                                const LabelSet& label_set);

SequencePrediction predict_sequence(std::span<const std::string> tokens,
                                    const TaggerModel& model, const EmbeddingSource& source);

// Versioned textual container; loading validates the version tag and all
// tensor dimensions.
void save_model(std::ostream& out, const TaggerModel& model);
TaggerModel load_model(std::istream& in);

}  // namespace xlner

#endif  // XLNER_TAGGER_HPP
