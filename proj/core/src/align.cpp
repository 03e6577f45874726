#include "xlner/align.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <istream>
#include <limits>
#include <ostream>

namespace xlner {

namespace {

// Cap the scratch block at ~64 MB regardless of vocabulary width.
Eigen::Index block_rows_for(Eigen::Index columns) {
  constexpr Eigen::Index kBudgetDoubles = Eigen::Index(8) << 20;
  return std::clamp<Eigen::Index>(kBudgetDoubles / std::max<Eigen::Index>(1, columns), 16, 512);
}

void require_normalized(const EmbeddingTable& table, const char* which) {
  if (!table.normalized) {
    throw ConfigError(std::string(which) + " embedding table must be normalized before alignment");
  }
}

// Mean of the K largest entries of a row.
double top_k_mean(const Eigen::RowVectorXd& row, int k, std::vector<double>& scratch) {
  scratch.assign(row.data(), row.data() + row.size());
  std::nth_element(scratch.begin(), scratch.begin() + (k - 1), scratch.end(),
                   std::greater<double>());
  double sum = 0.0;
  for (int i = 0; i < k; ++i) sum += scratch[static_cast<std::size_t>(i)];
  return sum / static_cast<double>(k);
}

// Per-row mean cosine to the K nearest rows of `other`; rows of both
// matrices are unit vectors, so cosine is the dot product.
Eigen::VectorXd top_k_neighbor_means(const Eigen::MatrixXd& rows,
                                     const Eigen::MatrixXd& other, int k) {
  Eigen::VectorXd result(rows.rows());
  std::vector<double> scratch;
  const Eigen::Index block_rows = block_rows_for(other.rows());
  for (Eigen::Index begin = 0; begin < rows.rows(); begin += block_rows) {
    Eigen::Index count = std::min(block_rows, rows.rows() - begin);
    Eigen::MatrixXd block = rows.middleRows(begin, count) * other.transpose();
    for (Eigen::Index i = 0; i < count; ++i) {
      result(begin + i) = top_k_mean(block.row(i), k, scratch);
    }
  }
  return result;
}

}  // namespace

double OrthogonalMapping::orthogonality_defect() const {
  return (matrix.transpose() * matrix - Eigen::MatrixXd::Identity(dim, dim)).norm();
}

SeedDictionary build_seed_dictionary(const EmbeddingTable& source,
                                     const EmbeddingTable& target,
                                     std::optional<std::size_t> max_pairs) {
  SeedDictionary dictionary;
  for (const auto& word : source.vocab) {
    if (max_pairs && dictionary.pairs.size() >= *max_pairs) break;
    if (target.find(word)) dictionary.pairs.emplace_back(word, word);
  }
  if (dictionary.pairs.size() < 2) {
    throw AlignmentError("seed dictionary infeasible: only " +
                         std::to_string(dictionary.pairs.size()) +
                         " identical strings shared by the vocabularies");
  }
  if (dictionary.pairs.size() < static_cast<std::size_t>(source.dim)) {
    std::cerr << "warning: seed dictionary has " << dictionary.pairs.size()
              << " pairs, fewer than the embedding dimension " << source.dim << "\n";
  }
  return dictionary;
}

OrthogonalMapping solve_procrustes(const SeedDictionary& dictionary,
                                   const EmbeddingTable& source,
                                   const EmbeddingTable& target) {
  require_normalized(source, "source");
  require_normalized(target, "target");
  if (source.dim != target.dim) {
    throw ConfigError("embedding dimensions differ: " + std::to_string(source.dim) + " vs " +
                      std::to_string(target.dim));
  }
  const int dim = source.dim;
  const Eigen::Index pairs = static_cast<Eigen::Index>(dictionary.size());
  Eigen::MatrixXd source_cols(dim, pairs);
  Eigen::MatrixXd target_cols(dim, pairs);
  for (Eigen::Index i = 0; i < pairs; ++i) {
    const auto& [src_word, tgt_word] = dictionary.pairs[static_cast<std::size_t>(i)];
    auto src_idx = source.find(src_word);
    if (!src_idx) throw LookupError("dictionary word not in source vocabulary: '" + src_word + "'");
    auto tgt_idx = target.find(tgt_word);
    if (!tgt_idx) throw LookupError("dictionary word not in target vocabulary: '" + tgt_word + "'");
    source_cols.col(i) = source.vectors.row(*src_idx).transpose();
    target_cols.col(i) = target.vectors.row(*tgt_idx).transpose();
  }

  Eigen::MatrixXd cross = target_cols * source_cols.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  OrthogonalMapping mapping;
  mapping.dim = dim;
  mapping.matrix = svd.matrixU() * svd.matrixV().transpose();
  mapping.residual = (mapping.matrix * source_cols - target_cols).norm();

  if (!mapping.matrix.allFinite() || mapping.orthogonality_defect() >= 1e-6 ||
      std::abs(std::abs(mapping.matrix.determinant()) - 1.0) >= 1e-6) {
    throw NumericError("SVD produced a non-orthogonal mapping");
  }
  return mapping;
}

double csls_score(const Eigen::VectorXd& mapped_source, const Eigen::VectorXd& target,
                  double r_t, double r_s) {
  double norm_product = mapped_source.norm() * target.norm();
  if (norm_product == 0.0) throw NumericError("csls_score on a zero vector");
  double cosine = mapped_source.dot(target) / norm_product;
  return 2.0 * cosine - r_t - r_s;
}

CslsPenalties compute_penalties(const Eigen::MatrixXd& mapped_source_rows,
                                const Eigen::MatrixXd& target_rows, int k) {
  if (k < 1 || k > target_rows.rows() || k > mapped_source_rows.rows()) {
    throw ConfigError("CSLS neighborhood size " + std::to_string(k) +
                      " out of range for vocabulary sizes " +
                      std::to_string(mapped_source_rows.rows()) + "/" +
                      std::to_string(target_rows.rows()));
  }
  CslsPenalties penalties;
  penalties.r_source = top_k_neighbor_means(mapped_source_rows, target_rows, k);
  penalties.r_target = top_k_neighbor_means(target_rows, mapped_source_rows, k);
  return penalties;
}

TranslationTable build_translation_table(const OrthogonalMapping& mapping,
                                         const EmbeddingTable& source,
                                         const EmbeddingTable& target, int k) {
  require_normalized(source, "source");
  require_normalized(target, "target");
  if (mapping.dim != source.dim) {
    throw ConfigError("mapping dimension does not match source embeddings");
  }
  Eigen::MatrixXd mapped = source.vectors * mapping.matrix.transpose();
  CslsPenalties penalties = compute_penalties(mapped, target.vectors, k);

  TranslationTable table;
  table.k = k;
  table.source_words = source.vocab;
  table.entries.resize(source.size());
  table.source_index = source.index;

  const Eigen::Index block_rows = block_rows_for(target.vectors.rows());
  for (Eigen::Index begin = 0; begin < mapped.rows(); begin += block_rows) {
    Eigen::Index count = std::min(block_rows, mapped.rows() - begin);
    Eigen::MatrixXd block = mapped.middleRows(begin, count) * target.vectors.transpose();
    for (Eigen::Index i = 0; i < count; ++i) {
      Eigen::Index best = 0;
      double best_score = -std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < block.cols(); ++j) {
        double score = 2.0 * block(i, j) - penalties.r_target(j);
        if (score > best_score) {
          best_score = score;
          best = j;
        }
      }
      auto& entry = table.entries[static_cast<std::size_t>(begin + i)];
      entry.target = target.vocab[static_cast<std::size_t>(best)];
      entry.score = best_score - penalties.r_source(begin + i);
    }
  }
  return table;
}

Translation translate_word(const std::string& word, const TranslationTable& table) {
  auto it = table.source_index.find(word);
  if (it == table.source_index.end()) return Translation{word, 0.0, true};
  const TranslationEntry& entry = table.entries[static_cast<std::size_t>(it->second)];
  return Translation{entry.target, entry.score, false};
}

std::vector<LabeledSentence> transfer_corpus(const std::vector<LabeledSentence>& corpus,
                                             const TranslationTable& table) {
  std::vector<LabeledSentence> transferred;
  transferred.reserve(corpus.size());
  for (const auto& sentence : corpus) {
    LabeledSentence out;
    out.labels = sentence.labels;
    out.tokens.reserve(sentence.tokens.size());
    for (const auto& token : sentence.tokens) {
      out.tokens.push_back(translate_word(token, table).word);
    }
    transferred.push_back(std::move(out));
  }
  return transferred;
}

void write_mapping(std::ostream& out, const OrthogonalMapping& mapping) {
  out << mapping.dim << '\n';
  for (int i = 0; i < mapping.dim; ++i) {
    for (int j = 0; j < mapping.dim; ++j) {
      if (j) out << ' ';
      out << format_double(mapping.matrix(i, j));
    }
    out << '\n';
  }
}

OrthogonalMapping read_mapping(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("mapping: missing dimension header");
  long long dim = parse_int(trim(line), "mapping dimension");
  if (dim <= 0) throw ParseError("mapping: dimension must be positive");
  OrthogonalMapping mapping;
  mapping.dim = static_cast<int>(dim);
  mapping.matrix.resize(mapping.dim, mapping.dim);
  for (int i = 0; i < mapping.dim; ++i) {
    if (!std::getline(in, line)) throw ParseError("mapping: truncated at row " + std::to_string(i + 1));
    std::vector<std::string> fields = split_fields(line);
    if (fields.size() != static_cast<std::size_t>(mapping.dim)) {
      throw ParseError("mapping: row " + std::to_string(i + 1) + " has " +
                       std::to_string(fields.size()) + " values, expected " +
                       std::to_string(mapping.dim));
    }
    for (int j = 0; j < mapping.dim; ++j) {
      mapping.matrix(i, j) = parse_double(fields[static_cast<std::size_t>(j)],
                                          "mapping row " + std::to_string(i + 1));
    }
  }
  if (!mapping.matrix.allFinite() || mapping.orthogonality_defect() >= 1e-6) {
    throw ValidationError("mapping file does not contain an orthogonal matrix");
  }
  return mapping;
}

void write_translation_table_tsv(std::ostream& out, const TranslationTable& table) {
  for (std::size_t i = 0; i < table.source_words.size(); ++i) {
    out << table.source_words[i] << '\t' << table.entries[i].target << '\t'
        << format_double(table.entries[i].score) << '\n';
  }
}

}  // namespace xlner
