#include "xlner/corpus.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace xlner {

LabelSet LabelSet::make(std::vector<std::string> entity_types) {
  std::unordered_set<std::string> seen;
  for (const auto& type : entity_types) {
    if (type.empty()) throw ConfigError("entity type name must not be empty");
    for (char ch : type) {
      if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') {
        throw ConfigError("entity type name must not contain whitespace: '" + type + "'");
      }
    }
    if (!seen.insert(type).second) {
      throw ConfigError("duplicate entity type: '" + type + "'");
    }
  }
  LabelSet set;
  set.entity_types = std::move(entity_types);
  set.labels.push_back("O");
  set.kinds.push_back(Kind::kOutside);
  set.type_index.push_back(-1);
  for (std::size_t t = 0; t < set.entity_types.size(); ++t) {
    set.labels.push_back("B-" + set.entity_types[t]);
    set.kinds.push_back(Kind::kBegin);
    set.type_index.push_back(static_cast<int>(t));
    set.labels.push_back("I-" + set.entity_types[t]);
    set.kinds.push_back(Kind::kInside);
    set.type_index.push_back(static_cast<int>(t));
  }
  return set;
}

LabelSet LabelSet::default_conll() {
  return make({"LOC", "MISC", "ORG", "PER"});
}

int LabelSet::id_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  return -1;
}

std::optional<std::size_t> find_bio_violation(const std::vector<int>& labels,
                                              const LabelSet& label_set) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int id = labels[i];
    if (id < 0 || static_cast<std::size_t>(id) >= label_set.size()) return i;
    if (label_set.kinds[id] != LabelSet::Kind::kInside) continue;
    if (i == 0) return i;
    int prev = labels[i - 1];
    if (label_set.kinds[prev] == LabelSet::Kind::kOutside) return i;
    if (label_set.type_index[prev] != label_set.type_index[id]) return i;
  }
  return std::nullopt;
}

namespace {

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

bool is_docstart(const std::string& line) {
  return line.rfind("-DOCSTART-", 0) == 0;
}

void finish_sentence(std::vector<LabeledSentence>& out, LabeledSentence& current,
                     const LabelSet& label_set, std::size_t sentence_number) {
  if (current.tokens.empty()) return;
  if (auto bad = find_bio_violation(current.labels, label_set)) {
    throw ValidationError("sentence " + std::to_string(sentence_number) + ", position " +
                          std::to_string(*bad + 1) + ": invalid BIO transition to '" +
                          label_set.labels[current.labels[*bad]] + "'");
  }
  out.push_back(std::move(current));
  current = LabeledSentence{};
}

}  // namespace

std::vector<LabeledSentence> read_conll(std::istream& in, const LabelSet& label_set) {
  std::vector<LabeledSentence> sentences;
  LabeledSentence current;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) {
      finish_sentence(sentences, current, label_set, sentences.size() + 1);
      continue;
    }
    if (is_docstart(line)) continue;
    std::vector<std::string> fields = split_fields(line);
    if (fields.size() < 2) {
      throw ParseError("line " + std::to_string(line_number) +
                       ": expected at least 2 columns, got " + std::to_string(fields.size()));
    }
    int id = label_set.id_of(fields.back());
    if (id < 0) {
      throw LabelError("line " + std::to_string(line_number) + ": unknown label '" +
                       fields.back() + "'");
    }
    current.tokens.push_back(fields.front());
    current.labels.push_back(id);
  }
  finish_sentence(sentences, current, label_set, sentences.size() + 1);
  return sentences;
}

void write_conll(std::ostream& out, const std::vector<LabeledSentence>& sentences,
                 const LabelSet& label_set) {
  for (const auto& sentence : sentences) {
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      out << sentence.tokens[i] << '\t' << label_set.labels[sentence.labels[i]] << '\n';
    }
    out << '\n';
  }
}

std::vector<UnlabeledSentence> read_tokens(std::istream& in) {
  std::vector<UnlabeledSentence> sentences;
  UnlabeledSentence current;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) {
      if (!current.tokens.empty()) {
        sentences.push_back(std::move(current));
        current = UnlabeledSentence{};
      }
      continue;
    }
    if (is_docstart(line)) continue;
    std::vector<std::string> fields = split_fields(line);
    current.tokens.push_back(fields.front());
  }
  if (!current.tokens.empty()) sentences.push_back(std::move(current));
  return sentences;
}

void write_tokens(std::ostream& out, const std::vector<UnlabeledSentence>& sentences) {
  for (const auto& sentence : sentences) {
    for (const auto& token : sentence.tokens) out << token << '\n';
    out << '\n';
  }
}

std::vector<EntitySpan> extract_spans(const std::vector<int>& labels,
                                      const LabelSet& label_set) {
  if (auto bad = find_bio_violation(labels, label_set)) {
    throw ValidationError("invalid BIO sequence at position " + std::to_string(*bad + 1));
  }
  std::vector<EntitySpan> spans;
  std::size_t i = 0;
  while (i < labels.size()) {
    if (label_set.kinds[labels[i]] == LabelSet::Kind::kBegin) {
      int type = label_set.type_index[labels[i]];
      std::size_t start = i;
      ++i;
      while (i < labels.size() && label_set.kinds[labels[i]] == LabelSet::Kind::kInside &&
             label_set.type_index[labels[i]] == type) {
        ++i;
      }
      spans.push_back(EntitySpan{start, i, label_set.entity_types[type]});
    } else {
      ++i;
    }
  }
  return spans;
}

std::vector<EntitySpan> extract_spans(const LabeledSentence& sentence,
                                      const LabelSet& label_set) {
  return extract_spans(sentence.labels, label_set);
}

}  // namespace xlner
