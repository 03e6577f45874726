#include "xlner/embed.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

namespace xlner {

void EmbeddingTable::rebuild_index() {
  index.clear();
  index.reserve(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    index.emplace(vocab[i], static_cast<int>(i));
  }
}

EmbeddingTable load_embeddings(std::istream& in, std::optional<int> max_vocab,
                               EmbeddingLoadReport* report) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("line 1: empty embedding stream");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_fields(line);
  if (header.size() != 2) {
    throw ParseError("line 1: expected header 'vocab_size dim'");
  }
  long long declared = parse_int(header[0], "line 1 vocab_size");
  long long dim = parse_int(header[1], "line 1 dim");
  if (declared < 0 || dim <= 0) throw ParseError("line 1: invalid header values");

  EmbeddingTable table;
  table.dim = static_cast<int>(dim);
  std::size_t capacity = static_cast<std::size_t>(declared);
  if (max_vocab) {
    if (*max_vocab < 0) throw ConfigError("max_vocab must be nonnegative");
    capacity = std::min(capacity, static_cast<std::size_t>(*max_vocab));
  }
  table.vocab.reserve(capacity);
  std::vector<double> values;
  values.reserve(capacity * static_cast<std::size_t>(dim));

  EmbeddingLoadReport local;
  std::size_t line_number = 1;
  while (table.vocab.size() < capacity && std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    // First space-separated token is the word, the rest are the values.
    std::size_t word_end = line.find(' ');
    if (word_end == std::string::npos || word_end == 0) {
      throw ParseError("line " + std::to_string(line_number) + ": expected 'word v1 ... v_d'");
    }
    std::string word = line.substr(0, word_end);

    std::size_t count = 0;
    Eigen::VectorXd vec(table.dim);
    const char* cursor = line.data() + word_end;
    const char* end = line.data() + line.size();
    while (cursor < end) {
      while (cursor < end && *cursor == ' ') ++cursor;
      if (cursor == end) break;
      const char* field_start = cursor;
      while (cursor < end && *cursor != ' ') ++cursor;
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(field_start, cursor, value);
      if (ec != std::errc() || ptr != cursor) {
        throw ParseError("line " + std::to_string(line_number) + ": not a number: '" +
                         std::string(field_start, cursor) + "'");
      }
      if (!std::isfinite(value)) {
        throw ParseError("line " + std::to_string(line_number) + ": non-finite value");
      }
      if (count >= static_cast<std::size_t>(table.dim)) {
        throw ParseError("line " + std::to_string(line_number) + ": row has more than " +
                         std::to_string(table.dim) + " values");
      }
      vec(static_cast<Eigen::Index>(count)) = value;
      ++count;
    }
    if (count != static_cast<std::size_t>(table.dim)) {
      throw ParseError("line " + std::to_string(line_number) + ": row has " +
                       std::to_string(count) + " values, header says " +
                       std::to_string(table.dim));
    }
    if (table.index.count(word)) {
      ++local.duplicates;
      continue;
    }
    table.index.emplace(word, static_cast<int>(table.vocab.size()));
    table.vocab.push_back(std::move(word));
    for (int j = 0; j < table.dim; ++j) values.push_back(vec(j));
  }

  table.vectors.resize(static_cast<Eigen::Index>(table.vocab.size()), table.dim);
  for (std::size_t i = 0; i < table.vocab.size(); ++i) {
    for (int j = 0; j < table.dim; ++j) {
      table.vectors(static_cast<Eigen::Index>(i), j) =
          values[i * static_cast<std::size_t>(table.dim) + static_cast<std::size_t>(j)];
    }
  }
  if (report) *report = local;
  return table;
}

void write_embeddings(std::ostream& out, const EmbeddingTable& table) {
  out << table.vocab.size() << ' ' << table.dim << '\n';
  for (std::size_t i = 0; i < table.vocab.size(); ++i) {
    out << table.vocab[i];
    for (int j = 0; j < table.dim; ++j) {
      out << ' ' << format_double(table.vectors(static_cast<Eigen::Index>(i), j));
    }
    out << '\n';
  }
}

EmbeddingTable normalize_rows(EmbeddingTable table) {
  for (std::size_t i = 0; i < table.vocab.size(); ++i) {
    double norm = table.vectors.row(static_cast<Eigen::Index>(i)).norm();
    if (norm == 0.0) {
      throw NumericError("cannot normalize zero vector for word '" + table.vocab[i] + "'");
    }
    table.vectors.row(static_cast<Eigen::Index>(i)) /= norm;
  }
  table.normalized = true;
  return table;
}

std::optional<WordVector> lookup(const EmbeddingTable& table, const std::string& word) {
  auto idx = table.find(word);
  if (!idx) return std::nullopt;
  return WordVector{word, table.vectors.row(*idx).transpose()};
}

}  // namespace xlner
