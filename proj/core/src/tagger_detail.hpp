#ifndef XLNER_TAGGER_DETAIL_HPP
#define XLNER_TAGGER_DETAIL_HPP

#include <Eigen/Core>
#include <functional>

#include "xlner/tagger.hpp"

namespace xlner::detail {

struct ForwardCache {
  Eigen::MatrixXd features;     // N x F
  Eigen::MatrixXd hidden_tanh;  // N x H, before dropout
  Eigen::MatrixXd hidden;       // N x H, after dropout
  Eigen::MatrixXd logits;       // N x C
  Eigen::MatrixXd proba;        // N x C
  Eigen::MatrixXd mask;         // N x H when dropout was applied
  bool has_mask = false;
};

struct Grads {
  Eigen::MatrixXd input_weight;
  Eigen::VectorXd input_bias;
  Eigen::MatrixXd class_weight;
  Eigen::VectorXd class_bias;

  static Grads zeros_like(const TaggerModel& model);
  void set_zero();
};

// Windowed concatenation of embedding rows; positions beyond the sentence
// edge contribute zero vectors.
Eigen::MatrixXd build_features(const Eigen::MatrixXd& embedded, int window);

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);
Eigen::MatrixXd log_softmax_rows(const Eigen::MatrixXd& logits);

// Inverted dropout mask: entries are 0 or 1/(1-rate).
Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, Rng& rng);

// mask == nullptr means inference (no dropout).
void forward(const TaggerModel& model, const Eigen::MatrixXd& features, ForwardCache& cache,
             const Eigen::MatrixXd* mask);

// Backpropagate d(loss)/d(logits) through the classifier and encoder,
// accumulating into grads.
void accumulate_logit_grad(const TaggerModel& model, const ForwardCache& cache,
                           const Eigen::MatrixXd& dlogits, Grads& grads);

struct AdamState {
  Grads first;
  Grads second;
  long step = 0;

  static AdamState zeros_like(const TaggerModel& model);
};

// One update with bias-corrected moments and decoupled weight decay.
void adam_step(TaggerModel& model, const Grads& grads, AdamState& state,
               const TrainConfig& config);

// Deterministic mini-batch loop shared by supervised and distillation
// training. step_fn processes one sentence: it must accumulate gradients
// scaled by `scale` (1/batch included) and return its scaled loss
// contribution. rng is consumed in a fixed order (dropout masks).
TrainLog train_loop(
    TaggerModel& model, const TrainConfig& config, std::size_t item_count, Rng& rng,
    const std::function<double(std::size_t item, double scale, Rng& rng, Grads& grads)>& step_fn);

}  // namespace xlner::detail

#endif  // XLNER_TAGGER_DETAIL_HPP
