#ifndef XLNER_METRICS_HPP
#define XLNER_METRICS_HPP

#include <span>
#include <string>
#include <vector>

#include "xlner/corpus.hpp"

namespace xlner {

struct TypeScore {
  std::string type;
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t correct = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Entity-level exact-match scores, micro-averaged; aggregation over
// repeated runs carries the per-run F1 list with mean and sample standard
// deviation.
struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t gold_spans = 0;
  std::size_t predicted_spans = 0;
  std::size_t correct_spans = 0;
  std::vector<TypeScore> per_type;

  std::vector<double> run_f1;
  double mean_f1 = 0.0;
  double std_f1 = 0.0;
  bool single_run = true;
};

// A predicted span is correct iff start, end, and type all match a gold
// span. Predictions must be BIO-valid and length-matched.
EvalReport evaluate(const std::vector<LabeledSentence>& gold,
                    const std::vector<std::vector<int>>& predicted,
                    const LabelSet& label_set);

// Mean and sample standard deviation of per-run F1.
EvalReport aggregate(std::span<const EvalReport> runs);

std::string format_report_table(const EvalReport& report);
// key=value lines for CI assertions.
std::string format_report_kv(const EvalReport& report);

}  // namespace xlner

#endif  // XLNER_METRICS_HPP
