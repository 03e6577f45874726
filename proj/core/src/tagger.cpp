#include "xlner/tagger.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "tagger_detail.hpp"

namespace xlner {

namespace detail {

Grads Grads::zeros_like(const TaggerModel& model) {
  Grads g;
  g.input_weight = Eigen::MatrixXd::Zero(model.input_weight.rows(), model.input_weight.cols());
  g.input_bias = Eigen::VectorXd::Zero(model.input_bias.size());
  g.class_weight = Eigen::MatrixXd::Zero(model.class_weight.rows(), model.class_weight.cols());
  g.class_bias = Eigen::VectorXd::Zero(model.class_bias.size());
  return g;
}

void Grads::set_zero() {
  input_weight.setZero();
  input_bias.setZero();
  class_weight.setZero();
  class_bias.setZero();
}

Eigen::MatrixXd build_features(const Eigen::MatrixXd& embedded, int window) {
  const Eigen::Index n = embedded.rows();
  const Eigen::Index dim = embedded.cols();
  Eigen::MatrixXd features = Eigen::MatrixXd::Zero(n, (2 * window + 1) * dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int offset = -window; offset <= window; ++offset) {
      Eigen::Index j = i + offset;
      if (j < 0 || j >= n) continue;
      features.block(i, (offset + window) * dim, 1, dim) = embedded.row(j);
    }
  }
  return features;
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd proba(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    double max_logit = logits.row(i).maxCoeff();
    Eigen::RowVectorXd shifted = (logits.row(i).array() - max_logit).exp();
    proba.row(i) = shifted / shifted.sum();
  }
  return proba;
}

Eigen::MatrixXd log_softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd logp(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    double max_logit = logits.row(i).maxCoeff();
    double lse = max_logit + std::log((logits.row(i).array() - max_logit).exp().sum());
    logp.row(i) = logits.row(i).array() - lse;
  }
  return logp;
}

Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, Rng& rng) {
  const double keep_scale = 1.0 / (1.0 - rate);
  Eigen::MatrixXd mask(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      mask(i, j) = rng.uniform() < rate ? 0.0 : keep_scale;
    }
  }
  return mask;
}

void forward(const TaggerModel& model, const Eigen::MatrixXd& features, ForwardCache& cache,
             const Eigen::MatrixXd* mask) {
  cache.features = features;
  Eigen::MatrixXd pre = features * model.input_weight.transpose();
  pre.rowwise() += model.input_bias.transpose();
  cache.hidden_tanh = pre.array().tanh();
  if (mask) {
    cache.mask = *mask;
    cache.has_mask = true;
    cache.hidden = cache.hidden_tanh.cwiseProduct(cache.mask);
  } else {
    cache.has_mask = false;
    cache.hidden = cache.hidden_tanh;
  }
  cache.logits = cache.hidden * model.class_weight.transpose();
  cache.logits.rowwise() += model.class_bias.transpose();
  if (!cache.logits.allFinite()) throw NumericError("non-finite logits");
  cache.proba = softmax_rows(cache.logits);
}

void accumulate_logit_grad(const TaggerModel& model, const ForwardCache& cache,
                           const Eigen::MatrixXd& dlogits, Grads& grads) {
  grads.class_weight.noalias() += dlogits.transpose() * cache.hidden;
  grads.class_bias.noalias() += dlogits.colwise().sum().transpose();
  Eigen::MatrixXd dhidden = dlogits * model.class_weight;
  if (cache.has_mask) dhidden = dhidden.cwiseProduct(cache.mask);
  Eigen::MatrixXd dpre =
      dhidden.cwiseProduct((1.0 - cache.hidden_tanh.array().square()).matrix());
  grads.input_weight.noalias() += dpre.transpose() * cache.features;
  grads.input_bias.noalias() += dpre.colwise().sum().transpose();
}

AdamState AdamState::zeros_like(const TaggerModel& model) {
  AdamState state;
  state.first = Grads::zeros_like(model);
  state.second = Grads::zeros_like(model);
  return state;
}

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEps = 1e-8;

template <typename Tensor>
void adam_update_tensor(Tensor& param, const Tensor& grad, Tensor& m, Tensor& v, long step,
                        const TrainConfig& config) {
  m = kBeta1 * m + (1.0 - kBeta1) * grad;
  v = (kBeta2 * v.array() + (1.0 - kBeta2) * grad.array().square()).matrix();
  double bias1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
  double bias2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
  Tensor m_hat = m / bias1;
  Tensor v_hat = v / bias2;
  param.array() -= config.learning_rate * m_hat.array() / (v_hat.array().sqrt() + kEps);
  if (config.weight_decay > 0.0) {
    param.array() -= config.learning_rate * config.weight_decay * param.array();
  }
}

}  // namespace

void adam_step(TaggerModel& model, const Grads& grads, AdamState& state,
               const TrainConfig& config) {
  ++state.step;
  adam_update_tensor(model.input_weight, grads.input_weight, state.first.input_weight,
                     state.second.input_weight, state.step, config);
  adam_update_tensor(model.input_bias, grads.input_bias, state.first.input_bias,
                     state.second.input_bias, state.step, config);
  adam_update_tensor(model.class_weight, grads.class_weight, state.first.class_weight,
                     state.second.class_weight, state.step, config);
  adam_update_tensor(model.class_bias, grads.class_bias, state.first.class_bias,
                     state.second.class_bias, state.step, config);
}

TrainLog train_loop(
    TaggerModel& model, const TrainConfig& config, std::size_t item_count, Rng& rng,
    const std::function<double(std::size_t, double, Rng&, Grads&)>& step_fn) {
  TrainLog log;
  std::vector<std::size_t> order(item_count);
  for (std::size_t i = 0; i < item_count; ++i) order[i] = i;

  Grads grads = Grads::zeros_like(model);
  AdamState adam = AdamState::zeros_like(model);
  const std::size_t batch_size = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss_sum = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t begin = 0; begin < item_count; begin += batch_size, ++batch_index) {
      std::size_t count = std::min(batch_size, item_count - begin);
      double scale = 1.0 / static_cast<double>(count);
      grads.set_zero();
      double batch_loss = 0.0;
      for (std::size_t offset = 0; offset < count; ++offset) {
        batch_loss += step_fn(order[begin + offset], scale, rng, grads);
      }
      if (!std::isfinite(batch_loss)) {
        throw TrainError("non-finite loss at epoch " + std::to_string(epoch + 1) + ", batch " +
                         std::to_string(batch_index + 1));
      }
      adam_step(model, grads, adam, config);
      epoch_loss_sum += batch_loss * static_cast<double>(count);
    }
    log.epoch_losses.push_back(epoch_loss_sum / static_cast<double>(item_count));
  }
  return log;
}

}  // namespace detail

void EncoderConfig::validate() const {
  if (window < 0) throw ConfigError("encoder window must be >= 0");
  if (hidden_dim < 1) throw ConfigError("encoder hidden_dim must be >= 1");
  if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
    throw ConfigError("dropout_rate must be in [0, 1)");
  }
  if (embedding_dim < 1) throw ConfigError("encoder embedding_dim must be >= 1");
}

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (learning_rate < 0.0) throw ConfigError("learning_rate must be >= 0");
  if (weight_decay < 0.0) throw ConfigError("weight_decay must be >= 0");
  if (max_sequence_length < 1) throw ConfigError("max_sequence_length must be >= 1");
}

Eigen::MatrixXd EmbeddingSource::embed(std::span<const std::string> tokens) const {
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(tokens.size()),
                                               table->dim);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto idx = table->find(tokens[i]);
    if (idx) rows.row(static_cast<Eigen::Index>(i)) = table->vectors.row(*idx);
  }
  if (mapping) {
    if (mapping->dim != table->dim) {
      throw ConfigError("orthogonal mapping dimension does not match embedding table");
    }
    rows = rows * mapping->matrix.transpose();
  }
  return rows;
}

bool TaggerModel::all_finite() const {
  return input_weight.allFinite() && input_bias.allFinite() && class_weight.allFinite() &&
         class_bias.allFinite();
}

bool TaggerModel::same_shape(const TaggerModel& other) const {
  return encoder.window == other.encoder.window &&
         encoder.hidden_dim == other.encoder.hidden_dim &&
         encoder.embedding_dim == other.encoder.embedding_dim &&
         label_set.same_as(other.label_set);
}

void Dataset::add_corpus(const std::vector<LabeledSentence>& corpus,
                         const EmbeddingSource& source) {
  items.reserve(items.size() + corpus.size());
  for (const auto& sentence : corpus) {
    items.push_back(Item{&sentence, &source});
  }
}

TaggerModel init_model(const EncoderConfig& encoder, const LabelSet& label_set,
                       std::uint64_t seed) {
  encoder.validate();
  TaggerModel model;
  model.encoder = encoder;
  model.label_set = label_set;
  const int features = encoder.feature_dim();
  const int hidden = encoder.hidden_dim;
  const int classes = static_cast<int>(label_set.size());

  Rng rng(mix_seed(seed, 0x1417u));
  double input_limit = std::sqrt(6.0 / static_cast<double>(features + hidden));
  model.input_weight.resize(hidden, features);
  for (int i = 0; i < hidden; ++i) {
    for (int j = 0; j < features; ++j) {
      model.input_weight(i, j) = rng.uniform(-input_limit, input_limit);
    }
  }
  model.input_bias = Eigen::VectorXd::Zero(hidden);
  double class_limit = std::sqrt(6.0 / static_cast<double>(hidden + classes));
  model.class_weight.resize(classes, hidden);
  for (int i = 0; i < classes; ++i) {
    for (int j = 0; j < hidden; ++j) {
      model.class_weight(i, j) = rng.uniform(-class_limit, class_limit);
    }
  }
  model.class_bias = Eigen::VectorXd::Zero(classes);
  return model;
}

namespace {

void check_dims(const TaggerModel& model, const EmbeddingSource& source) {
  if (model.encoder.embedding_dim != source.dim()) {
    throw ConfigError("model expects embedding dimension " +
                      std::to_string(model.encoder.embedding_dim) + ", table provides " +
                      std::to_string(source.dim()));
  }
}

}  // namespace

Eigen::MatrixXd encode(std::span<const std::string> tokens, const TaggerModel& model,
                       const EmbeddingSource& source) {
  check_dims(model, source);
  Eigen::MatrixXd features = detail::build_features(source.embed(tokens), model.encoder.window);
  Eigen::MatrixXd pre = features * model.input_weight.transpose();
  pre.rowwise() += model.input_bias.transpose();
  return pre.array().tanh();
}

Eigen::MatrixXd encode_train(std::span<const std::string> tokens, const TaggerModel& model,
                             const EmbeddingSource& source, Rng& rng) {
  Eigen::MatrixXd hidden = encode(tokens, model, source);
  if (model.encoder.dropout_rate > 0.0) {
    hidden = hidden.cwiseProduct(
        detail::dropout_mask(hidden.rows(), hidden.cols(), model.encoder.dropout_rate, rng));
  }
  return hidden;
}

Eigen::MatrixXd predict_proba(std::span<const std::string> tokens, const TaggerModel& model,
                              const EmbeddingSource& source) {
  check_dims(model, source);
  detail::ForwardCache cache;
  detail::forward(model, detail::build_features(source.embed(tokens), model.encoder.window),
                  cache, nullptr);
  return cache.proba;
}

double ce_loss(const Dataset& batch, const TaggerModel& model) {
  if (batch.items.empty()) throw ValidationError("ce_loss on an empty batch");
  double total = 0.0;
  for (const auto& item : batch.items) {
    check_dims(model, *item.embeddings);
    const auto& tokens = item.sentence->tokens;
    Eigen::MatrixXd features =
        detail::build_features(item.embeddings->embed(tokens), model.encoder.window);
    Eigen::MatrixXd logits = features * model.input_weight.transpose();
    logits.rowwise() += model.input_bias.transpose();
    logits = (logits.array().tanh().matrix() * model.class_weight.transpose());
    logits.rowwise() += model.class_bias.transpose();
    Eigen::MatrixXd logp = detail::log_softmax_rows(logits);
    double sentence_loss = 0.0;
    for (std::size_t i = 0; i < item.sentence->labels.size(); ++i) {
      sentence_loss -= logp(static_cast<Eigen::Index>(i), item.sentence->labels[i]);
    }
    total += sentence_loss / static_cast<double>(item.sentence->labels.size());
  }
  return total / static_cast<double>(batch.items.size());
}

namespace {

struct PreparedItem {
  Eigen::MatrixXd features;
  std::vector<int> labels;
};

std::vector<PreparedItem> prepare_items(const Dataset& data, const TaggerModel& model,
                                        int max_sequence_length) {
  std::vector<PreparedItem> prepared;
  prepared.reserve(data.items.size());
  for (const auto& item : data.items) {
    check_dims(model, *item.embeddings);
    if (item.sentence->tokens.empty()) throw TrainError("empty sentence in training corpus");
    std::size_t length =
        std::min(item.sentence->tokens.size(), static_cast<std::size_t>(max_sequence_length));
    std::span<const std::string> tokens(item.sentence->tokens.data(), length);
    PreparedItem p;
    p.features = detail::build_features(item.embeddings->embed(tokens), model.encoder.window);
    p.labels.assign(item.sentence->labels.begin(),
                    item.sentence->labels.begin() + static_cast<std::ptrdiff_t>(length));
    prepared.push_back(std::move(p));
  }
  return prepared;
}

}  // namespace

TaggerModel train(const Dataset& data, const TrainConfig& config, const TaggerModel& init,
                  TrainLog* log) {
  config.validate();
  init.encoder.validate();
  if (data.items.empty()) throw TrainError("training corpus is empty");
  if (!init.all_finite()) throw TrainError("initial model has non-finite parameters");

  TaggerModel model = init;
  std::vector<PreparedItem> prepared = prepare_items(data, model, config.max_sequence_length);

  Rng rng(mix_seed(config.seed, 0x7261696eu));
  const double dropout = model.encoder.dropout_rate;

  TrainLog result = detail::train_loop(
      model, config, prepared.size(), rng,
      [&](std::size_t index, double scale, Rng& step_rng, detail::Grads& grads) {
        const PreparedItem& item = prepared[index];
        detail::ForwardCache cache;
        if (dropout > 0.0) {
          Eigen::MatrixXd mask = detail::dropout_mask(
              item.features.rows(), model.encoder.hidden_dim, dropout, step_rng);
          detail::forward(model, item.features, cache, &mask);
        } else {
          detail::forward(model, item.features, cache, nullptr);
        }
        const double token_scale = scale / static_cast<double>(item.labels.size());
        Eigen::MatrixXd dlogits = cache.proba * token_scale;
        double loss = 0.0;
        Eigen::MatrixXd logp = detail::log_softmax_rows(cache.logits);
        for (std::size_t i = 0; i < item.labels.size(); ++i) {
          dlogits(static_cast<Eigen::Index>(i), item.labels[i]) -= token_scale;
          loss -= logp(static_cast<Eigen::Index>(i), item.labels[i]);
        }
        detail::accumulate_logit_grad(model, cache, dlogits, grads);
        return scale * loss / static_cast<double>(item.labels.size());
      });

  if (log) *log = std::move(result);
  return model;
}

TaggerModel train_fresh(const Dataset& data, const EncoderConfig& encoder,
                        const LabelSet& label_set, const TrainConfig& config, TrainLog* log) {
  return train(data, config, init_model(encoder, label_set, config.seed), log);
}

TaggerModel finetune(const TaggerModel& init, const Dataset& data, const TrainConfig& config,
                     TrainLog* log) {
  return train(data, config, init, log);
}

std::vector<int> argmax_labels(const Eigen::MatrixXd& probabilities) {
  std::vector<int> labels(static_cast<std::size_t>(probabilities.rows()));
  for (Eigen::Index i = 0; i < probabilities.rows(); ++i) {
    int best = 0;
    double best_value = probabilities(i, 0);
    for (Eigen::Index c = 1; c < probabilities.cols(); ++c) {
      if (probabilities(i, c) > best_value) {
        best_value = probabilities(i, c);
        best = static_cast<int>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
  }
  return labels;
}

std::vector<int> argmax_labels(std::span<const std::string> tokens, const TaggerModel& model,
                               const EmbeddingSource& source) {
  return argmax_labels(predict_proba(tokens, model, source));
}

std::vector<int> viterbi_decode(const Eigen::MatrixXd& probabilities,
                                const LabelSet& label_set) {
  const Eigen::Index n = probabilities.rows();
  const Eigen::Index classes = static_cast<Eigen::Index>(label_set.size());
  if (n == 0) return {};
  if (probabilities.cols() != classes) {
    throw ValidationError("probability rows have " + std::to_string(probabilities.cols()) +
                          " columns, label set has " + std::to_string(classes));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!probabilities.row(i).allFinite() || probabilities.row(i).minCoeff() < 0.0 ||
        std::abs(probabilities.row(i).sum() - 1.0) > 1e-6) {
      throw ValidationError("malformed probability row " + std::to_string(i + 1));
    }
  }

  const double neg_inf = -std::numeric_limits<double>::infinity();
  Eigen::MatrixXd logp =
      probabilities.array().max(1e-12).log().matrix();

  auto transition_allowed = [&](Eigen::Index prev, Eigen::Index next) {
    if (label_set.kinds[static_cast<std::size_t>(next)] != LabelSet::Kind::kInside) return true;
    const auto prev_kind = label_set.kinds[static_cast<std::size_t>(prev)];
    if (prev_kind == LabelSet::Kind::kOutside) return false;
    return label_set.type_index[static_cast<std::size_t>(prev)] ==
           label_set.type_index[static_cast<std::size_t>(next)];
  };

  Eigen::MatrixXd score(n, classes);
  Eigen::MatrixXi back(n, classes);
  for (Eigen::Index c = 0; c < classes; ++c) {
    bool start_ok = label_set.kinds[static_cast<std::size_t>(c)] != LabelSet::Kind::kInside;
    score(0, c) = start_ok ? logp(0, c) : neg_inf;
    back(0, c) = -1;
  }
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index c = 0; c < classes; ++c) {
      double best = neg_inf;
      int best_prev = -1;
      for (Eigen::Index prev = 0; prev < classes; ++prev) {
        if (!transition_allowed(prev, c)) continue;
        double candidate = score(i - 1, prev);
        if (best_prev < 0 || candidate > best) {
          best = candidate;
          best_prev = static_cast<int>(prev);
        }
      }
      score(i, c) = best == neg_inf ? neg_inf : best + logp(i, c);
      back(i, c) = best_prev;
    }
  }

  Eigen::Index best_final = 0;
  double best_score = score(n - 1, 0);
  for (Eigen::Index c = 1; c < classes; ++c) {
    if (score(n - 1, c) > best_score) {
      best_score = score(n - 1, c);
      best_final = c;
    }
  }

  std::vector<int> labels(static_cast<std::size_t>(n));
  Eigen::Index current = best_final;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    labels[static_cast<std::size_t>(i)] = static_cast<int>(current);
    if (i > 0) current = back(i, current);
  }
  return labels;
}

SequencePrediction predict_sequence(std::span<const std::string> tokens,
                                    const TaggerModel& model, const EmbeddingSource& source) {
  SequencePrediction prediction;
  prediction.probabilities = predict_proba(tokens, model, source);
  prediction.labels = viterbi_decode(prediction.probabilities, model.label_set);
  return prediction;
}

namespace {

constexpr const char* kModelMagic = "xlner-model";
constexpr int kModelVersion = 1;

void write_tensor(std::ostream& out, const char* name, const Eigen::MatrixXd& tensor) {
  out << "tensor " << name << ' ' << tensor.rows() << ' ' << tensor.cols() << '\n';
  for (Eigen::Index i = 0; i < tensor.rows(); ++i) {
    for (Eigen::Index j = 0; j < tensor.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(tensor(i, j));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_tensor(std::istream& in, const std::string& expected_name) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("model: missing tensor " + expected_name);
  std::vector<std::string> header = split_fields(line);
  if (header.size() != 4 || header[0] != "tensor" || header[1] != expected_name) {
    throw ParseError("model: expected tensor header for " + expected_name);
  }
  long long rows = parse_int(header[2], "tensor rows");
  long long cols = parse_int(header[3], "tensor cols");
  if (rows < 0 || cols <= 0) throw ParseError("model: invalid tensor shape");
  Eigen::MatrixXd tensor(rows, cols);
  for (long long i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) throw ParseError("model: truncated tensor " + expected_name);
    std::vector<std::string> fields = split_fields(line);
    if (fields.size() != static_cast<std::size_t>(cols)) {
      throw ParseError("model: tensor " + expected_name + " row " + std::to_string(i + 1) +
                       " has wrong arity");
    }
    for (long long j = 0; j < cols; ++j) {
      tensor(i, j) = parse_double(fields[static_cast<std::size_t>(j)],
                                  "tensor " + expected_name);
    }
  }
  if (!tensor.allFinite()) throw ValidationError("model: non-finite tensor " + expected_name);
  return tensor;
}

}  // namespace

void save_model(std::ostream& out, const TaggerModel& model) {
  out << kModelMagic << ' ' << kModelVersion << '\n';
  out << "entity_types " << model.label_set.entity_types.size();
  for (const auto& type : model.label_set.entity_types) out << ' ' << type;
  out << '\n';
  out << "window " << model.encoder.window << '\n';
  out << "hidden " << model.encoder.hidden_dim << '\n';
  out << "embedding_dim " << model.encoder.embedding_dim << '\n';
  out << "dropout " << format_double(model.encoder.dropout_rate) << '\n';
  write_tensor(out, "input_weight", model.input_weight);
  write_tensor(out, "input_bias", model.input_bias);
  write_tensor(out, "class_weight", model.class_weight);
  write_tensor(out, "class_bias", model.class_bias);
  out << "end\n";
}

TaggerModel load_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("model: empty stream");
  std::vector<std::string> magic = split_fields(line);
  if (magic.size() != 2 || magic[0] != kModelMagic) {
    throw ParseError("model: unrecognized container format");
  }
  if (parse_int(magic[1], "model version") != kModelVersion) {
    throw ParseError("model: unsupported version '" + magic[1] + "'");
  }

  if (!std::getline(in, line)) throw ParseError("model: missing entity_types");
  std::vector<std::string> fields = split_fields(line);
  if (fields.size() < 2 || fields[0] != "entity_types") {
    throw ParseError("model: expected entity_types line");
  }
  long long type_count = parse_int(fields[1], "entity type count");
  if (fields.size() != static_cast<std::size_t>(type_count) + 2) {
    throw ParseError("model: entity_types arity mismatch");
  }
  TaggerModel model;
  model.label_set =
      LabelSet::make(std::vector<std::string>(fields.begin() + 2, fields.end()));

  auto read_scalar = [&](const char* key) -> std::string {
    if (!std::getline(in, line)) throw ParseError(std::string("model: missing ") + key);
    std::vector<std::string> kv = split_fields(line);
    if (kv.size() != 2 || kv[0] != key) {
      throw ParseError(std::string("model: expected '") + key + "' line");
    }
    return kv[1];
  };
  model.encoder.window = static_cast<int>(parse_int(read_scalar("window"), "window"));
  model.encoder.hidden_dim = static_cast<int>(parse_int(read_scalar("hidden"), "hidden"));
  model.encoder.embedding_dim =
      static_cast<int>(parse_int(read_scalar("embedding_dim"), "embedding_dim"));
  model.encoder.dropout_rate = parse_double(read_scalar("dropout"), "dropout");
  model.encoder.validate();

  model.input_weight = read_tensor(in, "input_weight");
  model.input_bias = read_tensor(in, "input_bias");
  model.class_weight = read_tensor(in, "class_weight");
  model.class_bias = read_tensor(in, "class_bias");

  if (!std::getline(in, line) || trim(line) != "end") {
    throw ParseError("model: missing end marker");
  }

  const Eigen::Index hidden = model.encoder.hidden_dim;
  const Eigen::Index features = model.encoder.feature_dim();
  const Eigen::Index classes = static_cast<Eigen::Index>(model.label_set.size());
  if (model.input_weight.rows() != hidden || model.input_weight.cols() != features ||
      model.input_bias.rows() != hidden || model.class_weight.rows() != classes ||
      model.class_weight.cols() != hidden || model.class_bias.rows() != classes) {
    throw ValidationError("model: tensor dimensions do not match the declared configuration");
  }
  return model;
}

}  // namespace xlner
