#include "doctest.h"

#include <sstream>

#include "oracles.hpp"
#include "xlner/corpus.hpp"
#include "xlner/synth.hpp"

using namespace xlner;

namespace {

std::vector<std::string> label_names(const LabeledSentence& sentence, const LabelSet& set) {
  std::vector<std::string> names;
  for (int id : sentence.labels) names.push_back(set.labels[static_cast<std::size_t>(id)]);
  return names;
}

}  // namespace

TEST_CASE("label set layout is O then B/I per type") {
  LabelSet set = LabelSet::default_conll();
  REQUIRE(set.labels.size() == 9);
  CHECK(set.labels[0] == "O");
  CHECK(set.labels[1] == "B-LOC");
  CHECK(set.labels[2] == "I-LOC");
  CHECK(set.labels[7] == "B-PER");
  CHECK(set.labels[8] == "I-PER");
  CHECK(set.id_of("I-ORG") == 6);
  CHECK(set.id_of("B-XYZ") == -1);
  CHECK_THROWS_AS(LabelSet::make({"LOC", "LOC"}), ConfigError);
  CHECK_THROWS_AS(LabelSet::make({"TWO WORDS"}), ConfigError);
}

TEST_CASE("read_conll parses a two-token location") {
  LabelSet set = LabelSet::default_conll();
  std::istringstream in("La\tB-LOC\nHaya\tI-LOC\n\n");
  auto sentences = read_conll(in, set);
  REQUIRE(sentences.size() == 1);
  CHECK(sentences[0].tokens == std::vector<std::string>{"La", "Haya"});
  CHECK(sentences[0].labels == std::vector<int>{set.id_of("B-LOC"), set.id_of("I-LOC")});
}

TEST_CASE("read_conll rejects an inside label at sentence start") {
  LabelSet set = LabelSet::default_conll();
  std::istringstream in("x\tI-LOC\n\n");
  CHECK_THROWS_AS(read_conll(in, set), ValidationError);
}

TEST_CASE("read_conll accepts a final sentence without a trailing blank line") {
  LabelSet set = LabelSet::default_conll();
  std::istringstream in("a\tO\nb\tB-PER");
  auto sentences = read_conll(in, set);
  REQUIRE(sentences.size() == 1);
  CHECK(sentences[0].tokens.size() == 2);
}

TEST_CASE("read_conll takes the last column as the label and skips -DOCSTART-") {
  LabelSet set = LabelSet::default_conll();
  std::istringstream in("-DOCSTART- -X- -X- O\n\nEU NNP I-NP B-ORG\nrejects VBZ I-VP O\n\n");
  auto sentences = read_conll(in, set);
  REQUIRE(sentences.size() == 1);
  CHECK(sentences[0].tokens == std::vector<std::string>{"EU", "rejects"});
  CHECK(sentences[0].labels[0] == set.id_of("B-ORG"));
}

TEST_CASE("read_conll error cases carry positions") {
  LabelSet set = LabelSet::default_conll();
  {
    std::istringstream in("a\tO\nb\n\n");
    CHECK_THROWS_WITH_AS(read_conll(in, set), doctest::Contains("line 2"), ParseError);
  }
  {
    std::istringstream in("a\tB-FOO\n\n");
    CHECK_THROWS_AS(read_conll(in, set), LabelError);
  }
  {
    std::istringstream in("a\tB-LOC\nb\tI-PER\n\n");
    CHECK_THROWS_WITH_AS(read_conll(in, set), doctest::Contains("position 2"), ValidationError);
  }
}

TEST_CASE("write_conll round-trips and formats as token lines plus blank") {
  LabelSet set = LabelSet::default_conll();
  std::ostringstream empty_out;
  write_conll(empty_out, {}, set);
  CHECK(empty_out.str().empty());

  LabeledSentence sentence;
  sentence.tokens = {"a", "b"};
  sentence.labels = {set.id_of("B-PER"), set.id_of("I-PER")};
  std::ostringstream out;
  write_conll(out, {sentence}, set);
  CHECK(out.str() == "a\tB-PER\nb\tI-PER\n\n");
}

TEST_CASE("conll round-trip identity on synthetic corpora") {
  SynthConfig config;
  config.vocab_size = 80;
  config.source_sentences = 60;
  config.target_labeled = 20;
  config.target_unlabeled = 0;
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    SynthData data = generate_synthetic_bilingual(config, seed);
    std::ostringstream out;
    write_conll(out, data.source_train, data.label_set);
    std::istringstream in(out.str());
    auto round = read_conll(in, data.label_set);
    CHECK(round == data.source_train);
  }
}

TEST_CASE("extract_spans matches the reference extractor") {
  LabelSet set = LabelSet::default_conll();

  LabeledSentence person;
  person.tokens = {"x", "y", "z"};
  person.labels = {set.id_of("B-PER"), set.id_of("I-PER"), set.id_of("O")};
  auto spans = extract_spans(person, set);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0] == EntitySpan{0, 2, "PER"});

  LabeledSentence outside;
  outside.tokens = {"x", "y"};
  outside.labels = {0, 0};
  CHECK(extract_spans(outside, set).empty());

  LabeledSentence adjacent;
  adjacent.tokens = {"x", "y"};
  adjacent.labels = {set.id_of("B-LOC"), set.id_of("B-LOC")};
  auto two = extract_spans(adjacent, set);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == EntitySpan{0, 1, "LOC"});
  CHECK(two[1] == EntitySpan{1, 2, "LOC"});

  CHECK_THROWS_AS(extract_spans(std::vector<int>{set.id_of("I-LOC")}, set), ValidationError);
}

TEST_CASE("extract_spans equals the reference on random synthetic sentences") {
  SynthConfig config;
  config.vocab_size = 60;
  config.source_sentences = 120;
  config.target_labeled = 0;
  config.target_unlabeled = 0;
  SynthData data = generate_synthetic_bilingual(config, 11);
  std::size_t total_b = 0;
  for (const auto& sentence : data.source_train) {
    auto names = label_names(sentence, data.label_set);
    auto expected = oracle::extract_spans_reference(names);
    auto actual = extract_spans(sentence, data.label_set);
    CHECK(actual == expected);
    for (const auto& name : names) {
      if (name.rfind("B-", 0) == 0) ++total_b;
    }
  }
  std::size_t total_spans = 0;
  for (const auto& sentence : data.source_train) {
    total_spans += extract_spans(sentence, data.label_set).size();
  }
  CHECK(total_spans == total_b);
}

TEST_CASE("read_tokens accepts bare tokens and labeled lines") {
  std::istringstream in("hello\nworld extra\n\nsecond\n");
  auto sentences = read_tokens(in);
  REQUIRE(sentences.size() == 2);
  CHECK(sentences[0].tokens == std::vector<std::string>{"hello", "world"});
  CHECK(sentences[1].tokens == std::vector<std::string>{"second"});
}
