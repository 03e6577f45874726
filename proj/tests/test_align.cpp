#include "doctest.h"

#include <Eigen/Dense>
#include <sstream>

#include "oracles.hpp"
#include "xlner/align.hpp"
#include "xlner/synth.hpp"

using namespace xlner;

namespace {

EmbeddingTable make_table(const std::vector<std::string>& words, const Eigen::MatrixXd& rows,
                          bool normalized = true) {
  EmbeddingTable table;
  table.dim = static_cast<int>(rows.cols());
  table.vocab = words;
  table.vectors = rows;
  table.normalized = normalized;
  table.rebuild_index();
  return table;
}

EmbeddingTable random_unit_table(const std::string& prefix, int count, int dim, Rng& rng) {
  Eigen::MatrixXd rows(count, dim);
  std::vector<std::string> words;
  for (int i = 0; i < count; ++i) {
    words.push_back(prefix + std::to_string(i));
    for (int j = 0; j < dim; ++j) rows(i, j) = rng.normal();
    rows.row(i).normalize();
  }
  return make_table(words, rows);
}

OrthogonalMapping identity_mapping(int dim) {
  OrthogonalMapping mapping;
  mapping.dim = dim;
  mapping.matrix = Eigen::MatrixXd::Identity(dim, dim);
  mapping.residual = 0.0;
  return mapping;
}

}  // namespace

TEST_CASE("seed dictionary keeps identical strings in frequency order") {
  Eigen::MatrixXd rows = Eigen::MatrixXd::Identity(2, 2);
  EmbeddingTable source = make_table({"Berlin", "house"}, rows);
  EmbeddingTable target = make_table({"Berlin", "Haus"}, rows);
  // Only one shared string: infeasible (needs at least 2).
  CHECK_THROWS_AS(build_seed_dictionary(source, target), AlignmentError);

  Eigen::MatrixXd rows3 = Eigen::MatrixXd::Identity(3, 3);
  EmbeddingTable source3 = make_table({"Berlin", "house", "hotel"}, rows3);
  EmbeddingTable target3 = make_table({"hotel", "Haus", "Berlin"}, rows3);
  SeedDictionary dictionary = build_seed_dictionary(source3, target3);
  REQUIRE(dictionary.size() == 2);
  CHECK(dictionary.pairs[0].first == "Berlin");
  CHECK(dictionary.pairs[1].first == "hotel");

  SeedDictionary truncated = build_seed_dictionary(source3, target3, 2);
  CHECK(truncated.size() == 2);
}

TEST_CASE("seed dictionary on disjoint vocabularies is infeasible") {
  Eigen::MatrixXd rows = Eigen::MatrixXd::Identity(2, 2);
  EmbeddingTable source = make_table({"a", "b"}, rows);
  EmbeddingTable target = make_table({"c", "d"}, rows);
  CHECK_THROWS_AS(build_seed_dictionary(source, target), AlignmentError);
}

TEST_CASE("planted identical fraction yields roughly that many pairs") {
  SynthConfig config;
  config.vocab_size = 1000;
  config.identical_fraction = 0.3;
  config.source_sentences = 0;
  config.target_labeled = 0;
  config.target_unlabeled = 0;
  SynthData data = generate_synthetic_bilingual(config, 7);
  SeedDictionary dictionary =
      build_seed_dictionary(data.source_embeddings, data.target_embeddings);
  CHECK(dictionary.size() > 240);
  CHECK(dictionary.size() < 360);
}

TEST_CASE("procrustes on identical spaces is the identity") {
  Eigen::MatrixXd rows = Eigen::MatrixXd::Identity(2, 2);
  EmbeddingTable source = make_table({"u", "v"}, rows);
  EmbeddingTable target = make_table({"u", "v"}, rows);
  SeedDictionary dictionary = build_seed_dictionary(source, target);
  OrthogonalMapping mapping = solve_procrustes(dictionary, source, target);
  CHECK((mapping.matrix - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);
  CHECK(mapping.residual < 1e-12);
}

TEST_CASE("procrustes recovers a planted 90 degree rotation") {
  Eigen::Matrix2d rotation;
  rotation << 0, -1, 1, 0;
  Eigen::MatrixXd source_rows(2, 2);
  source_rows << 1, 0, 0, 1;
  Eigen::MatrixXd target_rows = (rotation * source_rows.transpose()).transpose();
  EmbeddingTable source = make_table({"a", "b"}, source_rows);
  EmbeddingTable target = make_table({"a", "b"}, target_rows);
  OrthogonalMapping mapping =
      solve_procrustes(build_seed_dictionary(source, target), source, target);
  CHECK((mapping.matrix - rotation).norm() < 1e-9);

  // Independent check: direct numerical minimization over the rotation angle.
  Eigen::Matrix2d scanned =
      oracle::procrustes_best_2d(source_rows.transpose(), target_rows.transpose());
  CHECK((mapping.matrix - scanned).norm() < 1e-6);
}

TEST_CASE("procrustes beats random orthogonal matrices and hits the algebraic optimum") {
  Rng rng(13);
  EmbeddingTable source = random_unit_table("w", 10, 4, rng);
  EmbeddingTable target = random_unit_table("w", 10, 4, rng);
  SeedDictionary dictionary = build_seed_dictionary(source, target);
  OrthogonalMapping mapping = solve_procrustes(dictionary, source, target);
  CHECK(mapping.orthogonality_defect() < 1e-6);
  CHECK(std::abs(std::abs(mapping.matrix.determinant()) - 1.0) < 1e-6);

  Eigen::MatrixXd source_cols = source.vectors.transpose();
  Eigen::MatrixXd target_cols = target.vectors.transpose();
  double objective = oracle::procrustes_objective(mapping.matrix, source_cols, target_cols);
  CHECK(objective == doctest::Approx(mapping.residual).epsilon(1e-12));
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::MatrixXd q = oracle::random_orthogonal(4, rng);
    CHECK(objective <= oracle::procrustes_objective(q, source_cols, target_cols) + 1e-12);
  }
  CHECK(std::abs(objective - oracle::procrustes_optimal_objective(source_cols, target_cols)) <
        1e-8);
}

TEST_CASE("procrustes requires normalized tables and known words") {
  Eigen::MatrixXd rows = Eigen::MatrixXd::Identity(2, 2);
  EmbeddingTable source = make_table({"a", "b"}, rows, false);
  EmbeddingTable target = make_table({"a", "b"}, rows, true);
  SeedDictionary dictionary;
  dictionary.pairs = {{"a", "a"}, {"b", "b"}};
  CHECK_THROWS_AS(solve_procrustes(dictionary, source, target), ConfigError);

  EmbeddingTable source_ok = make_table({"a", "b"}, rows, true);
  SeedDictionary missing;
  missing.pairs = {{"a", "a"}, {"zz", "b"}};
  CHECK_THROWS_AS(solve_procrustes(missing, source_ok, target), LookupError);
}

TEST_CASE("csls_score analytic cases") {
  Eigen::VectorXd x(2);
  x << 1, 0;
  CHECK(csls_score(x, x, 1.0, 1.0) == doctest::Approx(0.0));

  // cos = 0.9 with unit vectors, r_T = 0.5, r_S = 0.3 -> 2*0.9 - 0.8 = 1.0
  Eigen::VectorXd a(2);
  a << 1, 0;
  Eigen::VectorXd b(2);
  b << 0.9, std::sqrt(1 - 0.81);
  CHECK(csls_score(a, b, 0.5, 0.3) == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(csls_score(zero, x, 0.0, 0.0), NumericError);
}

TEST_CASE("penalty boundaries: K equal to vocabulary and K equal to one") {
  Rng rng(21);
  EmbeddingTable source = random_unit_table("s", 12, 4, rng);
  EmbeddingTable target = random_unit_table("t", 12, 4, rng);

  CslsPenalties all = compute_penalties(source.vectors, target.vectors, 12);
  for (int i = 0; i < 12; ++i) {
    double mean = 0.0;
    for (int j = 0; j < 12; ++j) mean += source.vectors.row(i).dot(target.vectors.row(j));
    mean /= 12.0;
    CHECK(all.r_source(i) == doctest::Approx(mean).epsilon(1e-12));
  }

  CslsPenalties nearest = compute_penalties(source.vectors, target.vectors, 1);
  for (int i = 0; i < 12; ++i) {
    double best = -2.0;
    for (int j = 0; j < 12; ++j) {
      best = std::max(best, source.vectors.row(i).dot(target.vectors.row(j)));
    }
    CHECK(nearest.r_source(i) == doctest::Approx(best).epsilon(1e-12));
  }

  CHECK_THROWS_AS(compute_penalties(source.vectors, target.vectors, 0), ConfigError);
  CHECK_THROWS_AS(compute_penalties(source.vectors, target.vectors, 13), ConfigError);
}

TEST_CASE("penalties and scores match the brute-force evaluation") {
  Rng rng(33);
  EmbeddingTable source = random_unit_table("s", 50, 6, rng);
  EmbeddingTable target = random_unit_table("t", 50, 6, rng);
  const int k = 10;
  CslsPenalties penalties = compute_penalties(source.vectors, target.vectors, k);
  oracle::CslsReference reference = oracle::csls_reference(source.vectors, target.vectors, k);
  for (int i = 0; i < 50; ++i) {
    CHECK(std::abs(penalties.r_source(i) - reference.r_source(i)) < 1e-9);
    CHECK(std::abs(penalties.r_target(i) - reference.r_target(i)) < 1e-9);
  }
  // Any (i, j) score assembled from precomputed penalties matches the
  // defining formula evaluated directly.
  for (int trial = 0; trial < 200; ++trial) {
    int i = static_cast<int>(rng.uniform_index(50));
    int j = static_cast<int>(rng.uniform_index(50));
    double score = csls_score(source.vectors.row(i).transpose(),
                              target.vectors.row(j).transpose(), penalties.r_source(i),
                              penalties.r_target(j));
    CHECK(std::abs(score - reference.score(i, j)) < 1e-9);
  }
}

TEST_CASE("noise-free planted rotation translates every dictionary word") {
  SynthConfig config;
  config.vocab_size = 120;
  config.identical_fraction = 0.3;
  config.noise = 0.0;
  config.source_sentences = 0;
  config.target_labeled = 0;
  config.target_unlabeled = 0;
  SynthData data = generate_synthetic_bilingual(config, 7);

  SeedDictionary dictionary =
      build_seed_dictionary(data.source_embeddings, data.target_embeddings);
  OrthogonalMapping mapping =
      solve_procrustes(dictionary, data.source_embeddings, data.target_embeddings);
  CHECK((mapping.matrix - data.planted_rotation).norm() < 1e-6);

  TranslationTable table =
      build_translation_table(mapping, data.source_embeddings, data.target_embeddings, 10);
  for (const auto& [src_word, tgt_word] : data.dictionary) {
    Translation translation = translate_word(src_word, table);
    CHECK_FALSE(translation.passthrough);
    CHECK(translation.word == tgt_word);
  }
}

TEST_CASE("out-of-vocabulary words pass through unchanged") {
  Rng rng(3);
  EmbeddingTable source = random_unit_table("s", 8, 4, rng);
  EmbeddingTable target = random_unit_table("t", 8, 4, rng);
  TranslationTable table = build_translation_table(identity_mapping(4), source, target, 2);
  Translation translation = translate_word("Zzzq", table);
  CHECK(translation.passthrough);
  CHECK(translation.word == "Zzzq");
}

TEST_CASE("equal scores break ties toward the lower target index") {
  // Target words 1 and 2 share a vector; the winner must be index 1.
  Eigen::MatrixXd source_rows(1, 2);
  source_rows << 1, 0;
  Eigen::MatrixXd target_rows(3, 2);
  target_rows << 0, 1, 1, 0, 1, 0;
  EmbeddingTable source = make_table({"w"}, source_rows);
  EmbeddingTable target = make_table({"far", "first", "second"}, target_rows);
  TranslationTable table = build_translation_table(identity_mapping(2), source, target, 1);
  CHECK(translate_word("w", table).word == "first");
}

TEST_CASE("transfer_corpus keeps lengths and labels and BIO validity") {
  SynthConfig config;
  config.vocab_size = 120;
  config.identical_fraction = 0.4;
  config.noise = 0.1;
  config.source_sentences = 50;
  config.target_labeled = 0;
  config.target_unlabeled = 0;
  SynthData data = generate_synthetic_bilingual(config, 19);
  OrthogonalMapping mapping = solve_procrustes(
      build_seed_dictionary(data.source_embeddings, data.target_embeddings),
      data.source_embeddings, data.target_embeddings);
  TranslationTable table =
      build_translation_table(mapping, data.source_embeddings, data.target_embeddings, 5);

  auto transferred = transfer_corpus(data.source_train, table);
  REQUIRE(transferred.size() == data.source_train.size());
  for (std::size_t s = 0; s < transferred.size(); ++s) {
    CHECK(transferred[s].tokens.size() == data.source_train[s].tokens.size());
    CHECK(transferred[s].labels == data.source_train[s].labels);
    CHECK_FALSE(find_bio_violation(transferred[s].labels, data.label_set).has_value());
  }

  LabeledSentence oov;
  oov.tokens = {"qq1", "qq2"};
  oov.labels = {data.label_set.id_of("B-PER"), data.label_set.id_of("O")};
  auto unchanged = transfer_corpus({oov}, table);
  CHECK(unchanged[0].tokens == oov.tokens);
  CHECK(unchanged[0].labels == oov.labels);
}

TEST_CASE("mapping serialization round-trips and validates") {
  Rng rng(4);
  Eigen::MatrixXd q = oracle::random_orthogonal(5, rng);
  OrthogonalMapping mapping;
  mapping.dim = 5;
  mapping.matrix = q;
  mapping.residual = 0.25;

  std::ostringstream out;
  write_mapping(out, mapping);
  std::istringstream in(out.str());
  OrthogonalMapping round = read_mapping(in);
  CHECK(round.dim == 5);
  CHECK(round.matrix == mapping.matrix);

  std::istringstream bad("2\n1 1\n1 1\n");
  CHECK_THROWS_AS(read_mapping(bad), ValidationError);
  std::istringstream truncated("3\n1 0 0\n");
  CHECK_THROWS_AS(read_mapping(truncated), ParseError);
}

TEST_CASE("translation table exports TSV in source order") {
  Rng rng(6);
  EmbeddingTable source = random_unit_table("s", 4, 3, rng);
  EmbeddingTable target = random_unit_table("t", 4, 3, rng);
  TranslationTable table = build_translation_table(identity_mapping(3), source, target, 2);
  std::ostringstream out;
  write_translation_table_tsv(out, table);
  std::istringstream lines(out.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    CHECK(line.rfind("s" + std::to_string(count) + "\t", 0) == 0);
    ++count;
  }
  CHECK(count == 4);
}
