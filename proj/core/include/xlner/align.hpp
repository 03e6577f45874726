#ifndef XLNER_ALIGN_HPP
#define XLNER_ALIGN_HPP

#include <Eigen/Core>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "xlner/corpus.hpp"
#include "xlner/embed.hpp"

namespace xlner {

struct SeedDictionary {
  std::vector<std::pair<std::string, std::string>> pairs;

  std::size_t size() const { return pairs.size(); }
};

// Orthogonal map P from the source embedding space into the target space,
// with the Frobenius objective value at the solution.
struct OrthogonalMapping {
  Eigen::MatrixXd matrix;  // dim x dim
  int dim = 0;
  double residual = 0.0;

  double orthogonality_defect() const;
};

struct TranslationEntry {
  std::string target;
  double score = 0.0;
};

// One entry per source-vocabulary word, in source frequency order.
struct TranslationTable {
  int k = 0;
  std::vector<std::string> source_words;
  std::vector<TranslationEntry> entries;
  std::unordered_map<std::string, int> source_index;
};

struct Translation {
  std::string word;
  double score = 0.0;
  bool passthrough = false;
};

struct CslsPenalties {
  Eigen::VectorXd r_source;  // per mapped source word (r_T in the retrieval score)
  Eigen::VectorXd r_target;  // per target word (r_S)
};

// Word pairs with identical surface strings in both vocabularies, ordered
// by source frequency rank. Fewer than 2 matches is an infeasible
// alignment; fewer pairs than the embedding dimension earns a warning on
// stderr.
SeedDictionary build_seed_dictionary(const EmbeddingTable& source,
                                     const EmbeddingTable& target,
                                     std::optional<std::size_t> max_pairs = std::nullopt);

// Closed-form solution of min ||P S - T||_F over orthogonal P via SVD of
// T S^T. Requires normalized tables and every dictionary word present.
OrthogonalMapping solve_procrustes(const SeedDictionary& dictionary,
                                   const EmbeddingTable& source,
                                   const EmbeddingTable& target);

// Retrieval score 2 cos(a, b) - r_t - r_s.
double csls_score(const Eigen::VectorXd& mapped_source, const Eigen::VectorXd& target,
                  double r_t, double r_s);

// Mean cosine to the K nearest cross-domain neighbors, both directions,
// computed exactly with blocked matrix products. Rows of both inputs must
// be unit vectors.
CslsPenalties compute_penalties(const Eigen::MatrixXd& mapped_source_rows,
                                const Eigen::MatrixXd& target_rows, int k);

// CSLS argmax over the full target vocabulary for every source word; ties
// broken toward the lower target index (higher frequency).
TranslationTable build_translation_table(const OrthogonalMapping& mapping,
                                         const EmbeddingTable& source,
                                         const EmbeddingTable& target, int k);

// In-vocabulary words translate through the table; out-of-vocabulary words
// pass through unchanged.
Translation translate_word(const std::string& word, const TranslationTable& table);

// Word-by-word translation with the label sequence copied verbatim.
std::vector<LabeledSentence> transfer_corpus(const std::vector<LabeledSentence>& corpus,
                                             const TranslationTable& table);

// Textual mapping format: first line is the dimension, then d rows of d
// numbers.
void write_mapping(std::ostream& out, const OrthogonalMapping& mapping);
OrthogonalMapping read_mapping(std::istream& in);

// TSV export: "src\ttgt\tscore" per source word.
void write_translation_table_tsv(std::ostream& out, const TranslationTable& table);

}  // namespace xlner

#endif  // XLNER_ALIGN_HPP
