#include "xlner/distill.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "tagger_detail.hpp"

namespace xlner {

void DistillConfig::validate() const {
  student.validate();
  if (eta < 0.0) throw ConfigError("eta must be >= 0");
  if (!use_soft && !use_hard) {
    throw ConfigError("at least one of the soft and hard losses must be enabled");
  }
}

namespace {

void check_teacher_family(std::span<const TaggerModel* const> models, const char* what) {
  if (models.empty()) throw ConfigError(std::string(what) + ": no models given");
  for (const TaggerModel* model : models) {
    if (!model->same_shape(*models.front())) {
      throw ConfigError(std::string(what) + ": models disagree on label set or dimensions");
    }
  }
}

// Running mean over model predictions; exact for identical predictions.
Eigen::MatrixXd ensemble_proba(std::span<const std::string> tokens,
                               std::span<const TaggerModel* const> models,
                               const EmbeddingSource& source) {
  Eigen::MatrixXd mean = predict_proba(tokens, *models.front(), source);
  for (std::size_t m = 1; m < models.size(); ++m) {
    Eigen::MatrixXd next = predict_proba(tokens, *models[m], source);
    mean += (next - mean) / static_cast<double>(m + 1);
  }
  return mean;
}

}  // namespace

SoftLabelSet soft_labels(const std::vector<UnlabeledSentence>& corpus,
                         std::span<const TaggerModel* const> teachers,
                         const EmbeddingSource& source) {
  check_teacher_family(teachers, "soft_labels");
  SoftLabelSet soft;
  soft.produced_by = static_cast<int>(teachers.size());
  soft.sentences.reserve(corpus.size());
  for (const auto& sentence : corpus) {
    soft.sentences.push_back(ensemble_proba(sentence.tokens, teachers, source));
  }
  return soft;
}

double soft_loss(const UnlabeledSentence& sentence, const Eigen::MatrixXd& teacher_rows,
                 const TaggerModel& student, const EmbeddingSource& source) {
  Eigen::MatrixXd student_rows = predict_proba(sentence.tokens, student, source);
  if (student_rows.rows() != teacher_rows.rows() ||
      student_rows.cols() != teacher_rows.cols()) {
    throw ValidationError("soft labels do not match the student prediction shape");
  }
  const double classes = static_cast<double>(teacher_rows.cols());
  double total = 0.0;
  for (Eigen::Index i = 0; i < teacher_rows.rows(); ++i) {
    total += (teacher_rows.row(i) - student_rows.row(i)).squaredNorm() / classes;
  }
  return total / static_cast<double>(teacher_rows.rows());
}

PseudoHardLabels vote_hard_labels(const std::vector<UnlabeledSentence>& corpus,
                                  std::span<const TaggerModel* const> source_models,
                                  std::span<const TaggerModel* const> teacher_models,
                                  std::span<const TaggerModel* const> translation_models,
                                  const EmbeddingSource& source, bool decode_with_viterbi) {
  check_teacher_family(source_models, "vote_hard_labels source family");
  check_teacher_family(teacher_models, "vote_hard_labels teacher family");
  check_teacher_family(translation_models, "vote_hard_labels translation family");
  if (!source_models.front()->same_shape(*teacher_models.front()) ||
      !source_models.front()->same_shape(*translation_models.front())) {
    throw ConfigError("voting models disagree on label set or dimensions");
  }
  const LabelSet& label_set = teacher_models.front()->label_set;

  PseudoHardLabels pseudo;
  pseudo.sentences.reserve(corpus.size());
  for (const auto& sentence : corpus) {
    auto decode = [&](std::span<const TaggerModel* const> family) {
      Eigen::MatrixXd proba = ensemble_proba(sentence.tokens, family, source);
      return decode_with_viterbi ? viterbi_decode(proba, label_set) : argmax_labels(proba);
    };
    std::vector<int> from_source = decode(source_models);
    std::vector<int> from_teacher = decode(teacher_models);
    std::vector<int> from_translation = decode(translation_models);
    std::vector<int> agreed(sentence.tokens.size(), PseudoHardLabels::kAbsent);
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      if (from_teacher[i] == from_source[i] && from_teacher[i] == from_translation[i]) {
        agreed[i] = from_teacher[i];
      }
    }
    pseudo.sentences.push_back(std::move(agreed));
  }
  return pseudo;
}

double hard_loss(const UnlabeledSentence& sentence, const std::vector<int>& pseudo_labels,
                 const TaggerModel& student, const EmbeddingSource& source) {
  if (pseudo_labels.size() != sentence.tokens.size()) {
    throw ValidationError("pseudo labels do not match the sentence length");
  }
  Eigen::MatrixXd features = detail::build_features(source.embed(sentence.tokens),
                                                    student.encoder.window);
  detail::ForwardCache cache;
  detail::forward(student, features, cache, nullptr);
  Eigen::MatrixXd logp = detail::log_softmax_rows(cache.logits);
  double total = 0.0;
  for (std::size_t i = 0; i < pseudo_labels.size(); ++i) {
    if (pseudo_labels[i] == PseudoHardLabels::kAbsent) continue;
    total -= logp(static_cast<Eigen::Index>(i), pseudo_labels[i]);
  }
  return total / static_cast<double>(sentence.tokens.size());
}

double distill_loss(const std::vector<UnlabeledSentence>& batch, const SoftLabelSet& soft,
                    const PseudoHardLabels* pseudo, const TaggerModel& student,
                    const EmbeddingSource& source, const DistillConfig& config) {
  config.validate();
  if (batch.empty()) throw ValidationError("distill_loss on an empty batch");
  if (soft.sentences.size() != batch.size() && config.use_soft) {
    throw ValidationError("soft label count does not match the batch");
  }
  // With eta = 0 the hard term vanishes and pseudo labels are not needed.
  if (config.use_hard && config.eta > 0.0 &&
      (!pseudo || pseudo->sentences.size() != batch.size())) {
    throw ValidationError("pseudo labels missing or mismatched while the hard loss is enabled");
  }
  double total = 0.0;
  for (std::size_t s = 0; s < batch.size(); ++s) {
    double sentence_loss = 0.0;
    if (config.use_soft) {
      sentence_loss += soft_loss(batch[s], soft.sentences[s], student, source);
    }
    if (config.use_hard && config.eta > 0.0) {
      sentence_loss += config.eta * hard_loss(batch[s], pseudo->sentences[s], student, source);
    }
    total += sentence_loss;
  }
  return total / static_cast<double>(batch.size());
}

TaggerModel train_student(const std::vector<UnlabeledSentence>& corpus,
                          const SoftLabelSet& soft, const PseudoHardLabels* pseudo,
                          const DistillConfig& config, const EncoderConfig& encoder,
                          const LabelSet& label_set, const EmbeddingSource& source,
                          const TaggerModel* warm_from, TrainLog* log) {
  config.validate();
  if (corpus.empty()) throw TrainError("distillation corpus is empty");
  const bool use_hard = config.use_hard && config.eta > 0.0;
  if (config.use_soft && soft.sentences.size() != corpus.size()) {
    throw ValidationError("soft label count does not match the corpus");
  }
  if (use_hard && (!pseudo || pseudo->sentences.size() != corpus.size())) {
    throw ValidationError("pseudo labels missing or mismatched while the hard loss is enabled");
  }
  if (config.warm_start && !warm_from) {
    throw ConfigError("warm_start requested but no teacher model supplied");
  }

  TaggerModel model = config.warm_start ? *warm_from
                                        : init_model(encoder, label_set, config.student.seed);

  // Truncate sentences and their label rows together.
  const std::size_t max_len = static_cast<std::size_t>(config.student.max_sequence_length);
  struct Prepared {
    Eigen::MatrixXd features;
    const Eigen::MatrixXd* soft_rows;
    const std::vector<int>* pseudo_rows;
    std::size_t length;
  };
  std::vector<Prepared> prepared;
  prepared.reserve(corpus.size());
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    if (corpus[s].tokens.empty()) throw TrainError("empty sentence in distillation corpus");
    if (config.use_soft &&
        (soft.sentences[s].rows() != static_cast<Eigen::Index>(corpus[s].tokens.size()) ||
         soft.sentences[s].cols() != static_cast<Eigen::Index>(label_set.size()))) {
      throw ValidationError("soft labels do not match sentence " + std::to_string(s + 1));
    }
    if (use_hard && pseudo->sentences[s].size() != corpus[s].tokens.size()) {
      throw ValidationError("pseudo labels do not match sentence " + std::to_string(s + 1));
    }
    std::size_t length = std::min(corpus[s].tokens.size(), max_len);
    std::span<const std::string> tokens(corpus[s].tokens.data(), length);
    Prepared p;
    p.features = detail::build_features(source.embed(tokens), encoder.window);
    p.soft_rows = config.use_soft ? &soft.sentences[s] : nullptr;
    p.pseudo_rows = use_hard ? &pseudo->sentences[s] : nullptr;
    p.length = length;
    prepared.push_back(std::move(p));
  }

  Rng rng(mix_seed(config.student.seed, 0x73747564u));
  const double dropout = encoder.dropout_rate;
  const double class_count = static_cast<double>(label_set.size());

  TrainLog result = detail::train_loop(
      model, config.student, prepared.size(), rng,
      [&](std::size_t index, double scale, Rng& step_rng, detail::Grads& grads) {
        const Prepared& item = prepared[index];
        const Eigen::Index n = static_cast<Eigen::Index>(item.length);
        detail::ForwardCache cache;
        if (dropout > 0.0) {
          Eigen::MatrixXd mask =
              detail::dropout_mask(n, encoder.hidden_dim, dropout, step_rng);
          detail::forward(model, item.features, cache, &mask);
        } else {
          detail::forward(model, item.features, cache, nullptr);
        }
        const double token_scale = scale / static_cast<double>(n);
        Eigen::MatrixXd dlogits = Eigen::MatrixXd::Zero(n, cache.proba.cols());
        double loss = 0.0;

        if (item.soft_rows) {
          // d/dp of the per-token mean squared error, then through softmax.
          for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::RowVectorXd diff = cache.proba.row(i) - item.soft_rows->row(i);
            loss += token_scale * diff.squaredNorm() / class_count;
            Eigen::RowVectorXd dp = (2.0 / class_count) * diff * token_scale;
            double inner = dp.cwiseProduct(cache.proba.row(i)).sum();
            dlogits.row(i) += cache.proba.row(i).cwiseProduct(
                dp - Eigen::RowVectorXd::Constant(dp.size(), inner));
          }
        }
        if (item.pseudo_rows) {
          Eigen::MatrixXd logp = detail::log_softmax_rows(cache.logits);
          const double hard_scale = config.eta * token_scale;
          for (Eigen::Index i = 0; i < n; ++i) {
            int label = (*item.pseudo_rows)[static_cast<std::size_t>(i)];
            if (label == PseudoHardLabels::kAbsent) continue;
            loss -= hard_scale * logp(i, label);
            dlogits.row(i) += hard_scale * cache.proba.row(i);
            dlogits(i, label) -= hard_scale;
          }
        }
        detail::accumulate_logit_grad(model, cache, dlogits, grads);
        return loss;
      });

  if (log) *log = std::move(result);
  return model;
}

namespace {

constexpr char kSoftMagic[8] = {'X', 'L', 'S', 'O', 'F', 'T', '0', '1'};

template <typename T>
void write_raw(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw ParseError("soft labels: truncated stream");
  }
  return value;
}

}  // namespace

void write_soft_labels(std::ostream& out, const SoftLabelSet& soft) {
  out.write(kSoftMagic, sizeof(kSoftMagic));
  write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(soft.produced_by));
  write_raw<std::uint64_t>(out, soft.sentences.size());
  for (std::size_t s = 0; s < soft.sentences.size(); ++s) {
    const Eigen::MatrixXd& rows = soft.sentences[s];
    write_raw<std::uint64_t>(out, s);
    write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(rows.rows()));
    write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(rows.cols()));
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      for (Eigen::Index j = 0; j < rows.cols(); ++j) {
        write_raw<double>(out, rows(i, j));
      }
    }
  }
}

SoftLabelSet read_soft_labels(std::istream& in) {
  char magic[sizeof(kSoftMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kSoftMagic, sizeof(magic)) != 0) {
    throw ParseError("soft labels: unrecognized container format");
  }
  SoftLabelSet soft;
  soft.produced_by = static_cast<int>(read_raw<std::uint32_t>(in));
  std::uint64_t count = read_raw<std::uint64_t>(in);
  soft.sentences.reserve(count);
  for (std::uint64_t s = 0; s < count; ++s) {
    std::uint64_t index = read_raw<std::uint64_t>(in);
    if (index != s) throw ParseError("soft labels: sentence index out of order");
    std::uint32_t rows = read_raw<std::uint32_t>(in);
    std::uint32_t cols = read_raw<std::uint32_t>(in);
    Eigen::MatrixXd m(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i) {
      for (std::uint32_t j = 0; j < cols; ++j) {
        m(i, j) = read_raw<double>(in);
      }
    }
    if (!m.allFinite()) throw ValidationError("soft labels: non-finite row");
    for (std::uint32_t i = 0; i < rows; ++i) {
      if (m.row(i).minCoeff() < 0.0 || std::abs(m.row(i).sum() - 1.0) > 1e-6) {
        throw ValidationError("soft labels: row " + std::to_string(i + 1) + " of sentence " +
                              std::to_string(s + 1) + " is not a probability vector");
      }
    }
    soft.sentences.push_back(std::move(m));
  }
  return soft;
}

void write_pseudo_labels(std::ostream& out, const std::vector<UnlabeledSentence>& corpus,
                         const PseudoHardLabels& pseudo, const LabelSet& label_set) {
  if (corpus.size() != pseudo.sentences.size()) {
    throw ValidationError("pseudo labels do not match the corpus");
  }
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    if (corpus[s].tokens.size() != pseudo.sentences[s].size()) {
      throw ValidationError("pseudo labels do not match sentence " + std::to_string(s + 1));
    }
    for (std::size_t i = 0; i < corpus[s].tokens.size(); ++i) {
      int label = pseudo.sentences[s][i];
      out << corpus[s].tokens[i] << '\t'
          << (label == PseudoHardLabels::kAbsent ? "_" : label_set.labels[label]) << '\n';
    }
    out << '\n';
  }
}

PseudoHardLabels read_pseudo_labels(std::istream& in, const LabelSet& label_set) {
  PseudoHardLabels pseudo;
  std::vector<int> current;
  bool any_token = false;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      if (any_token) {
        pseudo.sentences.push_back(std::move(current));
        current.clear();
        any_token = false;
      }
      continue;
    }
    std::vector<std::string> fields = split_fields(line);
    if (fields.size() < 2) {
      throw ParseError("line " + std::to_string(line_number) + ": expected 'token\\tlabel'");
    }
    any_token = true;
    if (fields.back() == "_") {
      current.push_back(PseudoHardLabels::kAbsent);
    } else {
      int id = label_set.id_of(fields.back());
      if (id < 0) {
        throw LabelError("line " + std::to_string(line_number) + ": unknown label '" +
                         fields.back() + "'");
      }
      current.push_back(id);
    }
  }
  if (any_token) pseudo.sentences.push_back(std::move(current));
  return pseudo;
}

}  // namespace xlner
