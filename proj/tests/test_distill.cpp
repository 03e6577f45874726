#include "doctest.h"

#include <sstream>

#include "grad_helpers.hpp"
#include "oracles.hpp"
#include "xlner/distill.hpp"
#include "xlner/synth.hpp"

using namespace xlner;

namespace {

struct Fixture {
  SynthData data;
  EmbeddingSource target_space;
  EncoderConfig encoder;

  explicit Fixture(std::uint64_t seed = 17, int unlabeled = 12) {
    SynthConfig config;
    config.vocab_size = 60;
    config.source_sentences = 0;
    config.target_labeled = 0;
    config.target_unlabeled = unlabeled;
    data = generate_synthetic_bilingual(config, seed);
    target_space = EmbeddingSource{&data.target_embeddings, nullptr};
    encoder.window = 1;
    encoder.hidden_dim = 6;
    encoder.dropout_rate = 0.0;
    encoder.embedding_dim = data.target_embeddings.dim;
  }

  TaggerModel random_model(std::uint64_t seed) const {
    return init_model(encoder, data.label_set, seed);
  }
};

}  // namespace

TEST_CASE("distill config needs at least one loss") {
  DistillConfig config;
  config.use_soft = false;
  config.use_hard = false;
  CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("distill defaults: unit trade-off, both losses enabled") {
  DistillConfig config;
  CHECK(config.eta == 1.0);
  CHECK(config.use_soft);
  CHECK(config.use_hard);
  CHECK_FALSE(config.warm_start);
}

TEST_CASE("identical teachers reproduce single-teacher soft labels bitwise") {
  Fixture fx;
  TaggerModel teacher = fx.random_model(1);
  const TaggerModel* single[] = {&teacher};
  const TaggerModel* triple[] = {&teacher, &teacher, &teacher};

  SoftLabelSet one = soft_labels(fx.data.target_unlabeled, single, fx.target_space);
  SoftLabelSet three = soft_labels(fx.data.target_unlabeled, triple, fx.target_space);
  CHECK(three.produced_by == 3);
  REQUIRE(one.sentences.size() == three.sentences.size());
  for (std::size_t s = 0; s < one.sentences.size(); ++s) {
    CHECK(one.sentences[s] == three.sentences[s]);
  }
}

TEST_CASE("two-teacher averaging is the arithmetic mean") {
  // Saturated one-hot classifiers on classes 0 and 1 average to (0.5, 0.5).
  Fixture fx(21, 3);
  TaggerModel first = fx.random_model(2);
  first.input_weight.setZero();
  first.input_bias.setZero();
  first.class_weight.setZero();
  first.class_bias.setZero();
  TaggerModel second = first;
  first.class_bias(0) = 1000.0;
  second.class_bias(1) = 1000.0;

  const TaggerModel* pair[] = {&first, &second};
  SoftLabelSet soft = soft_labels(fx.data.target_unlabeled, pair, fx.target_space);
  for (const auto& rows : soft.sentences) {
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      CHECK(rows(i, 0) == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(rows(i, 1) == doctest::Approx(0.5).epsilon(1e-12));
      for (Eigen::Index c = 2; c < rows.cols(); ++c) CHECK(rows(i, c) < 1e-9);
    }
  }
}

TEST_CASE("ensemble rows stay on the probability simplex") {
  Fixture fx(22, 10);
  TaggerModel a = fx.random_model(3);
  TaggerModel b = fx.random_model(4);
  TaggerModel c = fx.random_model(5);
  const TaggerModel* trio[] = {&a, &b, &c};
  SoftLabelSet soft = soft_labels(fx.data.target_unlabeled, trio, fx.target_space);
  for (const auto& rows : soft.sentences) {
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      CHECK(rows.row(i).minCoeff() >= 0.0);
      CHECK(std::abs(rows.row(i).sum() - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("soft_loss analytic cases and gradient") {
  Fixture fx(23, 4);
  TaggerModel student = fx.random_model(6);
  const UnlabeledSentence& sentence = fx.data.target_unlabeled.front();

  Eigen::MatrixXd own_rows = predict_proba(sentence.tokens, student, fx.target_space);
  CHECK(soft_loss(sentence, own_rows, student, fx.target_space) == doctest::Approx(0.0));

  // Diverging rows on a 2-class model: teacher (1,0), student (0,1) -> 1.
  LabelSet tiny = LabelSet::make({"X"});  // 3 classes: O, B-X, I-X
  EncoderConfig enc = fx.encoder;
  TaggerModel saturated = init_model(enc, tiny, 0);
  saturated.input_weight.setZero();
  saturated.input_bias.setZero();
  saturated.class_weight.setZero();
  saturated.class_bias.setZero();
  saturated.class_bias(1) = 1000.0;
  UnlabeledSentence one_token{{fx.data.target_unlabeled[1].tokens[0]}};
  Eigen::MatrixXd teacher_row = Eigen::MatrixXd::Zero(1, 3);
  teacher_row(0, 0) = 1.0;
  // MSE of (1,0,0) vs (0,1,0): mean of (1,1,0) squared diffs = 2/3.
  CHECK(soft_loss(one_token, teacher_row, saturated, fx.target_space) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-9));

  Eigen::MatrixXd wrong_shape = Eigen::MatrixXd::Zero(2, 3);
  CHECK_THROWS_AS(soft_loss(one_token, wrong_shape, saturated, fx.target_space),
                  ValidationError);

  // Gradient check against finite differences.
  Rng rng(7);
  for (int instance = 0; instance < 5; ++instance) {
    TaggerModel probe = fx.random_model(100 + static_cast<std::uint64_t>(instance));
    for (double* slot : oracle::parameter_slots(probe)) *slot += 0.05 * rng.normal();
    Eigen::MatrixXd teacher_rows = predict_proba(sentence.tokens, fx.random_model(50), fx.target_space);
    std::vector<double> finite = oracle::finite_difference_gradient(
        probe, [&]() { return soft_loss(sentence, teacher_rows, probe, fx.target_space); });
    std::vector<double> analytic =
        testaid::analytic_soft_gradient(sentence, teacher_rows, probe, fx.target_space);
    CHECK(oracle::max_relative_error(analytic, finite) < 1e-4);
  }
}

TEST_CASE("vote_hard_labels implements three-way agreement") {
  Fixture fx(24, 30);
  TaggerModel same = fx.random_model(8);
  const TaggerModel* family[] = {&same};

  PseudoHardLabels all_agree = vote_hard_labels(fx.data.target_unlabeled, family, family,
                                                family, fx.target_space);
  for (std::size_t s = 0; s < all_agree.sentences.size(); ++s) {
    for (int label : all_agree.sentences[s]) CHECK(label != PseudoHardLabels::kAbsent);
  }

  // Three saturated models predicting distinct classes never agree.
  TaggerModel a = fx.random_model(9);
  a.input_weight.setZero();
  a.class_weight.setZero();
  a.class_bias.setZero();
  TaggerModel b = a;
  TaggerModel c = a;
  a.class_bias(0) = 1000.0;
  b.class_bias(1) = 1000.0;
  c.class_bias(2) = 1000.0;
  const TaggerModel* fa[] = {&a};
  const TaggerModel* fb[] = {&b};
  const TaggerModel* fc[] = {&c};
  PseudoHardLabels none = vote_hard_labels(fx.data.target_unlabeled, fa, fb, fc,
                                           fx.target_space);
  for (const auto& sentence : none.sentences) {
    for (int label : sentence) CHECK(label == PseudoHardLabels::kAbsent);
  }

  // Randomized models: membership equals an independent per-token check.
  TaggerModel ra = fx.random_model(10);
  TaggerModel rb = fx.random_model(11);
  TaggerModel rc = fx.random_model(12);
  const TaggerModel* fra[] = {&ra};
  const TaggerModel* frb[] = {&rb};
  const TaggerModel* frc[] = {&rc};
  PseudoHardLabels voted = vote_hard_labels(fx.data.target_unlabeled, fra, frb, frc,
                                            fx.target_space);
  std::size_t labeled = 0;
  for (std::size_t s = 0; s < fx.data.target_unlabeled.size(); ++s) {
    const auto& tokens = fx.data.target_unlabeled[s].tokens;
    std::vector<int> la = argmax_labels(predict_proba(tokens, ra, fx.target_space));
    std::vector<int> lb = argmax_labels(predict_proba(tokens, rb, fx.target_space));
    std::vector<int> lc = argmax_labels(predict_proba(tokens, rc, fx.target_space));
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      bool agree = la[i] == lb[i] && lb[i] == lc[i];
      if (agree) {
        ++labeled;
        CHECK(voted.sentences[s][i] == lb[i]);
      } else {
        CHECK(voted.sentences[s][i] == PseudoHardLabels::kAbsent);
      }
    }
  }
  // Adding voters can only shrink the agreement set.
  std::size_t pairwise = 0;
  for (std::size_t s = 0; s < fx.data.target_unlabeled.size(); ++s) {
    const auto& tokens = fx.data.target_unlabeled[s].tokens;
    std::vector<int> la = argmax_labels(predict_proba(tokens, ra, fx.target_space));
    std::vector<int> lb = argmax_labels(predict_proba(tokens, rb, fx.target_space));
    for (std::size_t i = 0; i < tokens.size(); ++i) pairwise += la[i] == lb[i] ? 1 : 0;
  }
  CHECK(labeled <= pairwise);
}

TEST_CASE("hard_loss analytic cases and gradient") {
  Fixture fx(25, 4);
  TaggerModel student = fx.random_model(13);
  UnlabeledSentence sentence = fx.data.target_unlabeled.front();
  REQUIRE(sentence.tokens.size() >= 4);
  sentence.tokens.resize(4);

  std::vector<int> empty(4, PseudoHardLabels::kAbsent);
  CHECK(hard_loss(sentence, empty, student, fx.target_space) == 0.0);

  // Uniform student, one labeled token out of four: (1/4) ln 9.
  TaggerModel uniform = fx.random_model(14);
  uniform.input_weight.setZero();
  uniform.class_weight.setZero();
  uniform.class_bias.setZero();
  std::vector<int> one_label(4, PseudoHardLabels::kAbsent);
  one_label[2] = 3;
  CHECK(hard_loss(sentence, one_label, uniform, fx.target_space) ==
        doctest::Approx(std::log(9.0) / 4.0).epsilon(1e-12));

  // Saturated student on the pseudo labels: loss 0.
  TaggerModel saturated = uniform;
  saturated.class_bias(3) = 1000.0;
  std::vector<int> all_three(4, 3);
  CHECK(hard_loss(sentence, all_three, saturated, fx.target_space) == doctest::Approx(0.0));

  Rng rng(15);
  for (int instance = 0; instance < 5; ++instance) {
    TaggerModel probe = fx.random_model(200 + static_cast<std::uint64_t>(instance));
    for (double* slot : oracle::parameter_slots(probe)) *slot += 0.05 * rng.normal();
    std::vector<int> pseudo(4);
    for (auto& p : pseudo) {
      p = rng.uniform() < 0.3 ? PseudoHardLabels::kAbsent
                              : static_cast<int>(rng.uniform_index(fx.data.label_set.size()));
    }
    std::vector<double> finite = oracle::finite_difference_gradient(
        probe, [&]() { return hard_loss(sentence, pseudo, probe, fx.target_space); });
    std::vector<double> analytic =
        testaid::analytic_hard_gradient(sentence, pseudo, probe, fx.target_space);
    CHECK(oracle::max_relative_error(analytic, finite) < 1e-4);
  }
}

TEST_CASE("distill_loss composes the two terms") {
  Fixture fx(26, 6);
  TaggerModel teacher = fx.random_model(16);
  TaggerModel student = fx.random_model(17);
  const TaggerModel* single[] = {&teacher};
  SoftLabelSet soft = soft_labels(fx.data.target_unlabeled, single, fx.target_space);
  PseudoHardLabels pseudo = vote_hard_labels(fx.data.target_unlabeled, single, single, single,
                                             fx.target_space);

  DistillConfig both;
  both.eta = 1.0;
  DistillConfig soft_only = both;
  soft_only.use_hard = false;
  DistillConfig hard_only = both;
  hard_only.use_soft = false;

  double combined =
      distill_loss(fx.data.target_unlabeled, soft, &pseudo, student, fx.target_space, both);
  double soft_part = distill_loss(fx.data.target_unlabeled, soft, nullptr, student,
                                  fx.target_space, soft_only);
  double hard_part = distill_loss(fx.data.target_unlabeled, soft, &pseudo, student,
                                  fx.target_space, hard_only);
  CHECK(combined == doctest::Approx(soft_part + hard_part).epsilon(1e-12));

  // eta = 0 makes the loss independent of the pseudo labels.
  DistillConfig eta_zero = both;
  eta_zero.eta = 0.0;
  PseudoHardLabels corrupted = pseudo;
  for (auto& sentence : corrupted.sentences) {
    for (auto& label : sentence) label = label == 0 ? 1 : 0;
  }
  double with_labels = distill_loss(fx.data.target_unlabeled, soft, &pseudo, student,
                                    fx.target_space, eta_zero);
  double with_corrupted = distill_loss(fx.data.target_unlabeled, soft, &corrupted, student,
                                       fx.target_space, eta_zero);
  double without_labels = distill_loss(fx.data.target_unlabeled, soft, nullptr, student,
                                       fx.target_space, eta_zero);
  CHECK(with_labels == with_corrupted);
  CHECK(with_labels == without_labels);
  CHECK(with_labels == doctest::Approx(soft_part).epsilon(1e-12));

  // Combined gradient against finite differences (eta = 1).
  Rng rng(18);
  for (int instance = 0; instance < 3; ++instance) {
    TaggerModel probe = fx.random_model(300 + static_cast<std::uint64_t>(instance));
    for (double* slot : oracle::parameter_slots(probe)) *slot += 0.05 * rng.normal();
    std::vector<double> finite = oracle::finite_difference_gradient(probe, [&]() {
      return distill_loss(fx.data.target_unlabeled, soft, &pseudo, probe, fx.target_space,
                          both);
    });
    std::vector<double> analytic = testaid::analytic_distill_gradient(
        fx.data.target_unlabeled, soft, &pseudo, probe, fx.target_space, both);
    CHECK(oracle::max_relative_error(analytic, finite) < 1e-4);
  }
}

TEST_CASE("train_student validates flags and runs on degenerate input") {
  Fixture fx(27, 8);
  TaggerModel teacher = fx.random_model(19);
  const TaggerModel* single[] = {&teacher};
  SoftLabelSet soft = soft_labels(fx.data.target_unlabeled, single, fx.target_space);

  DistillConfig config;
  config.student.epochs = 1;
  config.student.batch_size = 4;
  config.use_hard = false;
  TaggerModel student = train_student(fx.data.target_unlabeled, soft, nullptr, config,
                                      fx.encoder, fx.data.label_set, fx.target_space);
  CHECK(student.all_finite());

  DistillConfig bad = config;
  bad.use_soft = false;
  bad.use_hard = false;
  CHECK_THROWS_AS(train_student(fx.data.target_unlabeled, soft, nullptr, bad, fx.encoder,
                                fx.data.label_set, fx.target_space),
                  ConfigError);

  CHECK_THROWS_AS(train_student({}, SoftLabelSet{}, nullptr, config, fx.encoder,
                                fx.data.label_set, fx.target_space),
                  TrainError);
}

TEST_CASE("distilling on the translated sentences themselves completes") {
  SynthConfig config;
  config.vocab_size = 60;
  config.source_sentences = 10;
  config.target_labeled = 0;
  config.target_unlabeled = 0;
  SynthData data = generate_synthetic_bilingual(config, 40);
  EmbeddingSource space{&data.target_embeddings, nullptr};
  EncoderConfig encoder;
  encoder.window = 1;
  encoder.hidden_dim = 6;
  encoder.embedding_dim = data.target_embeddings.dim;

  // Degenerate unlabeled corpus: the translated training sentences.
  std::vector<UnlabeledSentence> degenerate;
  for (const auto& sentence : data.source_train) {
    degenerate.push_back(UnlabeledSentence{sentence.tokens});
  }
  TaggerModel teacher = init_model(encoder, data.label_set, 1);
  const TaggerModel* single[] = {&teacher};
  SoftLabelSet soft = soft_labels(degenerate, single, space);
  DistillConfig distill;
  distill.use_hard = false;
  distill.student.epochs = 1;
  distill.student.batch_size = 4;
  TaggerModel student = train_student(degenerate, soft, nullptr, distill, encoder,
                                      data.label_set, space);
  CHECK(student.all_finite());
}

TEST_CASE("student training is deterministic given seeds") {
  Fixture fx(28, 10);
  TaggerModel teacher = fx.random_model(20);
  const TaggerModel* single[] = {&teacher};
  SoftLabelSet soft = soft_labels(fx.data.target_unlabeled, single, fx.target_space);
  PseudoHardLabels pseudo = vote_hard_labels(fx.data.target_unlabeled, single, single, single,
                                             fx.target_space);
  DistillConfig config;
  config.student.epochs = 2;
  config.student.batch_size = 4;
  config.student.seed = 77;

  TaggerModel first = train_student(fx.data.target_unlabeled, soft, &pseudo, config,
                                    fx.encoder, fx.data.label_set, fx.target_space);
  TaggerModel second = train_student(fx.data.target_unlabeled, soft, &pseudo, config,
                                     fx.encoder, fx.data.label_set, fx.target_space);
  std::ostringstream bytes_first;
  save_model(bytes_first, first);
  std::ostringstream bytes_second;
  save_model(bytes_second, second);
  CHECK(bytes_first.str() == bytes_second.str());
}

TEST_CASE("soft label container round-trips") {
  Fixture fx(29, 5);
  TaggerModel teacher = fx.random_model(21);
  const TaggerModel* single[] = {&teacher};
  SoftLabelSet soft = soft_labels(fx.data.target_unlabeled, single, fx.target_space);

  std::ostringstream out(std::ios::binary);
  write_soft_labels(out, soft);
  std::istringstream in(out.str(), std::ios::binary);
  SoftLabelSet round = read_soft_labels(in);
  CHECK(round.produced_by == soft.produced_by);
  REQUIRE(round.sentences.size() == soft.sentences.size());
  for (std::size_t s = 0; s < soft.sentences.size(); ++s) {
    CHECK(round.sentences[s] == soft.sentences[s]);
  }

  std::istringstream bad("wrong", std::ios::binary);
  CHECK_THROWS_AS(read_soft_labels(bad), ParseError);
}

TEST_CASE("pseudo label file round-trips with underscores") {
  Fixture fx(30, 6);
  PseudoHardLabels pseudo;
  for (const auto& sentence : fx.data.target_unlabeled) {
    std::vector<int> labels(sentence.tokens.size(), PseudoHardLabels::kAbsent);
    if (!labels.empty()) labels[0] = 1;
    pseudo.sentences.push_back(std::move(labels));
  }
  std::ostringstream out;
  write_pseudo_labels(out, fx.data.target_unlabeled, pseudo, fx.data.label_set);
  CHECK(out.str().find("\t_") != std::string::npos);

  std::istringstream in(out.str());
  PseudoHardLabels round = read_pseudo_labels(in, fx.data.label_set);
  REQUIRE(round.sentences.size() == pseudo.sentences.size());
  for (std::size_t s = 0; s < pseudo.sentences.size(); ++s) {
    CHECK(round.sentences[s] == pseudo.sentences[s]);
  }
}
