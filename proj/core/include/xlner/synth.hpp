#ifndef XLNER_SYNTH_HPP
#define XLNER_SYNTH_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "xlner/corpus.hpp"
#include "xlner/embed.hpp"

namespace xlner {

// Desk-scale bilingual benchmark: every vocabulary word belongs to one
// label role, embeddings cluster around per-role anchor directions (so the
// tagging task is linearly separable in the encoder features), and the
// target space is an exact orthogonal rotation of the source space plus
// configurable Gaussian noise. A fraction of words share their surface
// string across languages to seed the alignment.
struct SynthConfig {
  int dim = 16;
  int vocab_size = 600;
  double identical_fraction = 0.3;
  double noise = 0.0;  // std of the Gaussian perturbation of target vectors
  int source_sentences = 400;
  int target_labeled = 200;    // held out for evaluation only
  int target_unlabeled = 600;
  int min_sentence_length = 5;
  int max_sentence_length = 11;
  std::vector<std::string> entity_types = {"LOC", "MISC", "ORG", "PER"};
  double entity_density = 0.35;  // probability of starting an entity segment
  double outside_fraction = 0.5; // fraction of the vocabulary labeled O
  double role_jitter = 0.2;      // within-role embedding spread

  void validate() const;
};

struct SynthData {
  LabelSet label_set;
  std::vector<LabeledSentence> source_train;
  std::vector<LabeledSentence> target_eval;
  std::vector<UnlabeledSentence> target_unlabeled;
  std::vector<std::pair<std::string, std::string>> dictionary;  // gold word pairs
  EmbeddingTable source_embeddings;  // unit rows
  EmbeddingTable target_embeddings;  // unit rows
  Eigen::MatrixXd planted_rotation;  // the orthogonal map target = R * source
};

// Pure function of (config, seed): repeated calls return identical data.
SynthData generate_synthetic_bilingual(const SynthConfig& config, std::uint64_t seed);

}  // namespace xlner

#endif  // XLNER_SYNTH_HPP
