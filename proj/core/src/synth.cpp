#include "xlner/synth.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace xlner {

void SynthConfig::validate() const {
  if (dim <= 0) throw ConfigError("synth: dim must be positive");
  if (vocab_size <= 0) throw ConfigError("synth: vocab_size must be positive");
  if (entity_types.empty()) throw ConfigError("synth: entity type inventory is empty");
  const int roles = 1 + 2 * static_cast<int>(entity_types.size());
  if (dim < roles) {
    throw ConfigError("synth: dim must be at least the number of labels (" +
                      std::to_string(roles) + ")");
  }
  if (vocab_size < 2 * roles) {
    throw ConfigError("synth: vocab_size too small to cover every label role");
  }
  if (identical_fraction < 0.0 || identical_fraction > 1.0) {
    throw ConfigError("synth: identical_fraction must be in [0, 1]");
  }
  if (noise < 0.0) throw ConfigError("synth: noise must be >= 0");
  if (source_sentences < 0 || target_labeled < 0 || target_unlabeled < 0) {
    throw ConfigError("synth: sentence counts must be >= 0");
  }
  if (min_sentence_length < 1 || max_sentence_length < min_sentence_length) {
    throw ConfigError("synth: invalid sentence length range");
  }
  if (entity_density < 0.0 || entity_density > 1.0) {
    throw ConfigError("synth: entity_density must be in [0, 1]");
  }
  if (outside_fraction <= 0.0 || outside_fraction >= 1.0) {
    throw ConfigError("synth: outside_fraction must be in (0, 1)");
  }
  if (role_jitter <= 0.0) throw ConfigError("synth: role_jitter must be positive");
}

namespace {

Eigen::VectorXd random_gaussian(int dim, Rng& rng) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.normal();
  return v;
}

// Random orthogonal matrix from the QR factorization of a Gaussian matrix,
// with the sign convention fixed for determinism.
Eigen::MatrixXd random_orthogonal(int dim, Rng& rng) {
  Eigen::MatrixXd gaussian(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) gaussian(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

// Orthonormal anchor directions, one per label role.
std::vector<Eigen::VectorXd> role_anchors(int roles, int dim, Rng& rng) {
  std::vector<Eigen::VectorXd> anchors;
  anchors.reserve(static_cast<std::size_t>(roles));
  while (static_cast<int>(anchors.size()) < roles) {
    Eigen::VectorXd v = random_gaussian(dim, rng);
    for (const auto& prev : anchors) v -= prev.dot(v) * prev;
    double norm = v.norm();
    if (norm < 1e-6) continue;  // numerically degenerate draw, resample
    anchors.push_back(v / norm);
  }
  return anchors;
}

}  // namespace

SynthData generate_synthetic_bilingual(const SynthConfig& config, std::uint64_t seed) {
  config.validate();
  SynthData data;
  data.label_set = LabelSet::make(config.entity_types);
  const int roles = static_cast<int>(data.label_set.size());
  const int entity_roles = roles - 1;
  const int vocab = config.vocab_size;
  const int dim = config.dim;

  Rng rng(mix_seed(seed, 0x73796e74u));

  // Role per word: the first chunk is O, the rest round-robins over the
  // entity roles so every role has words.
  int outside_words =
      std::max(1, static_cast<int>(std::lround(config.outside_fraction * vocab)));
  // Every entity role needs at least one word.
  outside_words = std::min(outside_words, vocab - entity_roles);
  std::vector<int> word_role(static_cast<std::size_t>(vocab));
  std::vector<std::vector<int>> role_words(static_cast<std::size_t>(roles));
  for (int w = 0; w < vocab; ++w) {
    int role = w < outside_words ? 0 : 1 + (w - outside_words) % entity_roles;
    word_role[static_cast<std::size_t>(w)] = role;
    role_words[static_cast<std::size_t>(role)].push_back(w);
  }

  // Surface strings; identical strings seed the alignment dictionary.
  std::vector<std::string> source_words(static_cast<std::size_t>(vocab));
  std::vector<std::string> target_words(static_cast<std::size_t>(vocab));
  for (int w = 0; w < vocab; ++w) {
    if (rng.uniform() < config.identical_fraction) {
      source_words[w] = "c" + std::to_string(w);
      target_words[w] = source_words[w];
    } else {
      source_words[w] = "s" + std::to_string(w);
      target_words[w] = "t" + std::to_string(w);
    }
  }

  std::vector<Eigen::VectorXd> anchors = role_anchors(roles, dim, rng);
  data.planted_rotation = random_orthogonal(dim, rng);

  data.source_embeddings.dim = dim;
  data.source_embeddings.vocab = source_words;
  data.source_embeddings.vectors.resize(vocab, dim);
  data.target_embeddings.dim = dim;
  data.target_embeddings.vocab = target_words;
  data.target_embeddings.vectors.resize(vocab, dim);
  for (int w = 0; w < vocab; ++w) {
    Eigen::VectorXd source_vec =
        anchors[static_cast<std::size_t>(word_role[w])] + config.role_jitter * random_gaussian(dim, rng);
    source_vec.normalize();
    Eigen::VectorXd target_vec = data.planted_rotation * source_vec;
    if (config.noise > 0.0) {
      target_vec += config.noise * random_gaussian(dim, rng);
    }
    target_vec.normalize();
    data.source_embeddings.vectors.row(w) = source_vec.transpose();
    data.target_embeddings.vectors.row(w) = target_vec.transpose();
  }
  data.source_embeddings.normalized = true;
  data.target_embeddings.normalized = true;
  data.source_embeddings.rebuild_index();
  data.target_embeddings.rebuild_index();

  data.dictionary.reserve(static_cast<std::size_t>(vocab));
  for (int w = 0; w < vocab; ++w) {
    data.dictionary.emplace_back(source_words[w], target_words[w]);
  }

  // Sentence generation: alternating O runs and entity segments; an entity
  // is a B word followed by I words of the same type.
  auto sample_word = [&](int role) {
    const auto& pool = role_words[static_cast<std::size_t>(role)];
    return pool[rng.uniform_index(pool.size())];
  };
  auto generate_sentence = [&](const std::vector<std::string>& words) {
    LabeledSentence sentence;
    int length = config.min_sentence_length +
                 static_cast<int>(rng.uniform_index(static_cast<std::size_t>(
                     config.max_sentence_length - config.min_sentence_length + 1)));
    while (static_cast<int>(sentence.tokens.size()) < length) {
      int remaining = length - static_cast<int>(sentence.tokens.size());
      if (remaining >= 1 && rng.uniform() < config.entity_density) {
        int type = static_cast<int>(rng.uniform_index(config.entity_types.size()));
        int begin_role = 1 + 2 * type;
        int inside_role = begin_role + 1;
        double u = rng.uniform();
        int entity_length = u < 0.5 ? 1 : (u < 0.8 ? 2 : 3);
        entity_length = std::min(entity_length, remaining);
        sentence.tokens.push_back(words[sample_word(begin_role)]);
        sentence.labels.push_back(begin_role);
        for (int i = 1; i < entity_length; ++i) {
          sentence.tokens.push_back(words[sample_word(inside_role)]);
          sentence.labels.push_back(inside_role);
        }
      } else {
        sentence.tokens.push_back(words[sample_word(0)]);
        sentence.labels.push_back(0);
      }
    }
    return sentence;
  };

  data.source_train.reserve(static_cast<std::size_t>(config.source_sentences));
  for (int s = 0; s < config.source_sentences; ++s) {
    data.source_train.push_back(generate_sentence(source_words));
  }
  data.target_eval.reserve(static_cast<std::size_t>(config.target_labeled));
  for (int s = 0; s < config.target_labeled; ++s) {
    data.target_eval.push_back(generate_sentence(target_words));
  }
  data.target_unlabeled.reserve(static_cast<std::size_t>(config.target_unlabeled));
  for (int s = 0; s < config.target_unlabeled; ++s) {
    LabeledSentence labeled = generate_sentence(target_words);
    data.target_unlabeled.push_back(UnlabeledSentence{std::move(labeled.tokens)});
  }
  return data;
}

}  // namespace xlner
