#ifndef XLNER_DISTILL_HPP
#define XLNER_DISTILL_HPP

#include <Eigen/Core>
#include <iosfwd>
#include <span>
#include <vector>

#include "xlner/tagger.hpp"

namespace xlner {

// Per-token teacher probability rows for an unlabeled corpus, possibly
// averaged over an ensemble.
struct SoftLabelSet {
  std::vector<Eigen::MatrixXd> sentences;  // N_s x |C| each
  int produced_by = 1;                     // ensemble size M
};

// Voted pseudo labels: a class id per token where all three voters agree,
// kAbsent elsewhere.
struct PseudoHardLabels {
  static constexpr int kAbsent = -1;
  std::vector<std::vector<int>> sentences;
};

struct DistillConfig {
  double eta = 1.0;  // hard-loss weight
  TrainConfig student;
  bool use_soft = true;
  bool use_hard = true;
  bool warm_start = false;  // start from the teacher instead of a fresh init

  void validate() const;
};

// Teacher probability rows, averaged over the M teachers with a running
// mean (exact for identical inputs). Teachers run in inference mode (no
// dropout).
SoftLabelSet soft_labels(const std::vector<UnlabeledSentence>& corpus,
                         std::span<const TaggerModel* const> teachers,
                         const EmbeddingSource& source);

// (1/N) sum_i MSE(teacher row, student row); teacher rows are constants.
double soft_loss(const UnlabeledSentence& sentence, const Eigen::MatrixXd& teacher_rows,
                 const TaggerModel& student, const EmbeddingSource& source);

// Token-level three-way agreement of per-model argmax predictions; each
// voter family may be an ensemble whose predictions are averaged before
// the argmax. The agreed label is the teacher's.
PseudoHardLabels vote_hard_labels(const std::vector<UnlabeledSentence>& corpus,
                                  std::span<const TaggerModel* const> source_models,
                                  std::span<const TaggerModel* const> teacher_models,
                                  std::span<const TaggerModel* const> translation_models,
                                  const EmbeddingSource& source,
                                  bool decode_with_viterbi = false);

// (1/N) sum_i I(i in X) * (-log p[pseudo_i]); the normalizer counts all
// tokens, not only the labeled ones.
double hard_loss(const UnlabeledSentence& sentence, const std::vector<int>& pseudo_labels,
                 const TaggerModel& student, const EmbeddingSource& source);

// Mean over sentences of eta * hard + soft, with disabled terms
// contributing zero. pseudo may be null when use_hard is off.
double distill_loss(const std::vector<UnlabeledSentence>& batch, const SoftLabelSet& soft,
                    const PseudoHardLabels* pseudo, const TaggerModel& student,
                    const EmbeddingSource& source, const DistillConfig& config);

// Train the student on unlabeled text from precomputed soft and pseudo
// labels; teachers are never re-run. Fresh random init from the student
// seed unless warm_start provides the teacher parameters.
TaggerModel train_student(const std::vector<UnlabeledSentence>& corpus,
                          const SoftLabelSet& soft, const PseudoHardLabels* pseudo,
                          const DistillConfig& config, const EncoderConfig& encoder,
                          const LabelSet& label_set, const EmbeddingSource& source,
                          const TaggerModel* warm_from = nullptr, TrainLog* log = nullptr);

// Binary tensor container keyed by sentence index.
void write_soft_labels(std::ostream& out, const SoftLabelSet& soft);
SoftLabelSet read_soft_labels(std::istream& in);

// CoNLL-format file with the reserved label "_" for absent tokens.
void write_pseudo_labels(std::ostream& out, const std::vector<UnlabeledSentence>& corpus,
                         const PseudoHardLabels& pseudo, const LabelSet& label_set);
PseudoHardLabels read_pseudo_labels(std::istream& in, const LabelSet& label_set);

}  // namespace xlner

#endif  // XLNER_DISTILL_HPP
