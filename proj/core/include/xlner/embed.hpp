#ifndef XLNER_EMBED_HPP
#define XLNER_EMBED_HPP

#include <Eigen/Core>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "xlner/common.hpp"

namespace xlner {

struct WordVector {
  std::string word;
  Eigen::VectorXd vector;
};

// Monolingual word embeddings, one row per word, file order preserved
// (file order is frequency order). Immutable after load.
struct EmbeddingTable {
  int dim = 0;
  std::vector<std::string> vocab;
  Eigen::MatrixXd vectors;  // |vocab| x dim
  bool normalized = false;
  std::unordered_map<std::string, int> index;

  std::size_t size() const { return vocab.size(); }
  std::optional<int> find(const std::string& word) const {
    auto it = index.find(word);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
  void rebuild_index();
};

struct EmbeddingLoadReport {
  std::size_t duplicates = 0;
};

// fastText text format: header "vocab_size dim", then "word v1 ... v_d"
// per line, single-space separated. Keeps at most max_vocab entries in
// file order; duplicate words keep the first occurrence and are counted.
EmbeddingTable load_embeddings(std::istream& in,
                               std::optional<int> max_vocab = std::nullopt,
                               EmbeddingLoadReport* report = nullptr);

void write_embeddings(std::ostream& out, const EmbeddingTable& table);

// Each row divided by its Euclidean norm; a zero row is an error naming
// the word. Cosine similarities are unchanged.
EmbeddingTable normalize_rows(EmbeddingTable table);

// Exact case-sensitive match; absence is a value, not an error.
std::optional<WordVector> lookup(const EmbeddingTable& table, const std::string& word);

}  // namespace xlner

#endif  // XLNER_EMBED_HPP
