#ifndef XLNER_CORPUS_HPP
#define XLNER_CORPUS_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "xlner/common.hpp"

namespace xlner {

// BIO label inventory. Class ids are indices into `labels`:
// labels[0] == "O", then B-T/I-T for every entity type in order.
struct LabelSet {
  std::vector<std::string> entity_types;
  std::vector<std::string> labels;

  enum class Kind { kOutside, kBegin, kInside };
  // Per class id: kind and entity-type index (-1 for O).
  std::vector<Kind> kinds;
  std::vector<int> type_index;

  static LabelSet make(std::vector<std::string> entity_types);
  // LOC, MISC, ORG, PER; |labels| == 9.
  static LabelSet default_conll();

  std::size_t size() const { return labels.size(); }
  // -1 if the label string is unknown.
  int id_of(const std::string& label) const;
  bool same_as(const LabelSet& other) const { return labels == other.labels; }
};

struct LabeledSentence {
  std::vector<std::string> tokens;
  std::vector<int> labels;

  bool operator==(const LabeledSentence&) const = default;
};

struct UnlabeledSentence {
  std::vector<std::string> tokens;

  bool operator==(const UnlabeledSentence&) const = default;
};

struct EntitySpan {
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // exclusive
  std::string type;

  bool operator==(const EntitySpan&) const = default;
};

// First position violating the BIO scheme, or nullopt if valid.
std::optional<std::size_t> find_bio_violation(const std::vector<int>& labels,
                                              const LabelSet& label_set);

// Token-per-line column format: token is column 0, the label is the last
// column, at least two columns per line, blank line ends a sentence.
// Lines starting with "-DOCSTART-" are skipped.
std::vector<LabeledSentence> read_conll(std::istream& in, const LabelSet& label_set);

void write_conll(std::ostream& out, const std::vector<LabeledSentence>& sentences,
                 const LabelSet& label_set);

// Token corpus reader for unlabeled text: first column of each line is the
// token, any further columns are ignored.
std::vector<UnlabeledSentence> read_tokens(std::istream& in);

void write_tokens(std::ostream& out, const std::vector<UnlabeledSentence>& sentences);

// Maximal B-X (I-X)* runs as half-open spans, sorted by start.
std::vector<EntitySpan> extract_spans(const LabeledSentence& sentence,
                                      const LabelSet& label_set);
std::vector<EntitySpan> extract_spans(const std::vector<int>& labels,
                                      const LabelSet& label_set);

}  // namespace xlner

#endif  // XLNER_CORPUS_HPP
