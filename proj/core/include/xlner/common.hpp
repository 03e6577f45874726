#ifndef XLNER_COMMON_HPP
#define XLNER_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace xlner {

// Error taxonomy. Every exception carries a human-readable message with
// the offending location (line, sentence, word) where one exists.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LabelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AlignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LookupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// splitmix64 finalizer; used to derive independent sub-seeds from a base
// seed without correlating the streams.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

// Deterministic random source. All randomness in the project flows through
// this class from explicit seeds; distributions are implemented here rather
// than with std::*_distribution so that the byte stream does not depend on
// the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix_seed(seed, 0x9e3779b97f4a7c15ull)) {}

  std::uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller (second value cached).
  double normal();

  // Uniform integer in [0, n); n must be positive.
  std::size_t uniform_index(std::size_t n);

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    if (v.size() < 2) return;
    for (std::size_t i = v.size() - 1; i > 0; --i) {
      std::size_t j = uniform_index(i + 1);
      std::swap(v[i], v[j]);
    }
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Shortest round-trip decimal representation (std::to_chars). Used for all
// textual artifacts so that identical values serialize to identical bytes.
std::string format_double(double value);

// Strict full-string numeric parsing; throws ParseError on failure.
double parse_double(const std::string& text, const std::string& what);
long long parse_int(const std::string& text, const std::string& what);

// Whitespace-delimited fields of a line.
std::vector<std::string> split_fields(const std::string& line);

// Split on a single character, keeping empty fields.
std::vector<std::string> split_char(const std::string& text, char sep);

std::string trim(const std::string& text);

}  // namespace xlner

#endif  // XLNER_COMMON_HPP
