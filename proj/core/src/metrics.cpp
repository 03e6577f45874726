#include "xlner/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "xlner/common.hpp"

namespace xlner {

namespace {

double safe_ratio(std::size_t numerator, std::size_t denominator) {
  return denominator == 0 ? 0.0 : static_cast<double>(numerator) / static_cast<double>(denominator);
}

double f1_of(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

}  // namespace

EvalReport evaluate(const std::vector<LabeledSentence>& gold,
                    const std::vector<std::vector<int>>& predicted,
                    const LabelSet& label_set) {
  if (gold.size() != predicted.size()) {
    throw ValidationError("prediction count " + std::to_string(predicted.size()) +
                          " does not match gold sentence count " + std::to_string(gold.size()));
  }

  struct Counts {
    std::size_t gold = 0;
    std::size_t predicted = 0;
    std::size_t correct = 0;
  };
  std::map<std::string, Counts> by_type;
  for (const auto& type : label_set.entity_types) by_type[type];

  EvalReport report;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].labels.size() != predicted[s].size()) {
      throw ValidationError("sentence " + std::to_string(s + 1) +
                            ": prediction length does not match gold length");
    }
    if (find_bio_violation(predicted[s], label_set)) {
      throw ValidationError("sentence " + std::to_string(s + 1) +
                            ": predictions are not a valid BIO sequence");
    }
    std::vector<EntitySpan> gold_spans = extract_spans(gold[s].labels, label_set);
    std::vector<EntitySpan> pred_spans = extract_spans(predicted[s], label_set);
    report.gold_spans += gold_spans.size();
    report.predicted_spans += pred_spans.size();
    for (const auto& span : gold_spans) ++by_type[span.type].gold;
    for (const auto& span : pred_spans) ++by_type[span.type].predicted;
    for (const auto& span : pred_spans) {
      if (std::find(gold_spans.begin(), gold_spans.end(), span) != gold_spans.end()) {
        ++report.correct_spans;
        ++by_type[span.type].correct;
      }
    }
  }

  report.precision = safe_ratio(report.correct_spans, report.predicted_spans);
  report.recall = safe_ratio(report.correct_spans, report.gold_spans);
  report.f1 = f1_of(report.precision, report.recall);
  for (const auto& [type, counts] : by_type) {
    TypeScore score;
    score.type = type;
    score.gold = counts.gold;
    score.predicted = counts.predicted;
    score.correct = counts.correct;
    score.precision = safe_ratio(counts.correct, counts.predicted);
    score.recall = safe_ratio(counts.correct, counts.gold);
    score.f1 = f1_of(score.precision, score.recall);
    report.per_type.push_back(std::move(score));
  }
  report.run_f1 = {report.f1};
  report.mean_f1 = report.f1;
  report.std_f1 = 0.0;
  report.single_run = true;
  return report;
}

EvalReport aggregate(std::span<const EvalReport> runs) {
  if (runs.empty()) throw ValidationError("aggregate over zero runs");
  EvalReport report;
  report.run_f1.reserve(runs.size());
  double precision_sum = 0.0;
  double recall_sum = 0.0;
  std::map<std::string, TypeScore> pooled;
  for (const auto& run : runs) {
    report.run_f1.push_back(run.f1);
    precision_sum += run.precision;
    recall_sum += run.recall;
    report.gold_spans += run.gold_spans;
    report.predicted_spans += run.predicted_spans;
    report.correct_spans += run.correct_spans;
    for (const auto& type : run.per_type) {
      TypeScore& merged = pooled[type.type];
      merged.type = type.type;
      merged.gold += type.gold;
      merged.predicted += type.predicted;
      merged.correct += type.correct;
    }
  }
  // Per-type rows are pooled counts over all runs.
  for (auto& [name, merged] : pooled) {
    merged.precision = safe_ratio(merged.correct, merged.predicted);
    merged.recall = safe_ratio(merged.correct, merged.gold);
    merged.f1 = f1_of(merged.precision, merged.recall);
    report.per_type.push_back(merged);
  }
  const double n = static_cast<double>(runs.size());
  double mean = 0.0;
  for (double f1 : report.run_f1) mean += f1;
  mean /= n;
  double variance = 0.0;
  if (runs.size() > 1) {
    for (double f1 : report.run_f1) variance += (f1 - mean) * (f1 - mean);
    variance /= (n - 1.0);
  }
  report.mean_f1 = mean;
  report.std_f1 = std::sqrt(variance);
  report.single_run = runs.size() == 1;
  report.f1 = mean;
  report.precision = precision_sum / n;
  report.recall = recall_sum / n;
  return report;
}

std::string format_report_table(const EvalReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-10s %8s %8s %8s %10s %10s %10s\n", "type", "gold",
                "pred", "correct", "precision", "recall", "f1");
  out << line;
  for (const auto& type : report.per_type) {
    std::snprintf(line, sizeof(line), "%-10s %8zu %8zu %8zu %10.4f %10.4f %10.4f\n",
                  type.type.c_str(), type.gold, type.predicted, type.correct, type.precision,
                  type.recall, type.f1);
    out << line;
  }
  std::snprintf(line, sizeof(line), "%-10s %8zu %8zu %8zu %10.4f %10.4f %10.4f\n", "ALL",
                report.gold_spans, report.predicted_spans, report.correct_spans,
                report.precision, report.recall, report.f1);
  out << line;
  if (!report.single_run) {
    std::snprintf(line, sizeof(line), "runs %zu  mean_f1 %.4f  std_f1 %.4f\n",
                  report.run_f1.size(), report.mean_f1, report.std_f1);
    out << line;
  }
  return out.str();
}

std::string format_report_kv(const EvalReport& report) {
  std::ostringstream out;
  out << "precision=" << format_double(report.precision) << '\n';
  out << "recall=" << format_double(report.recall) << '\n';
  out << "f1=" << format_double(report.f1) << '\n';
  out << "gold_spans=" << report.gold_spans << '\n';
  out << "predicted_spans=" << report.predicted_spans << '\n';
  out << "correct_spans=" << report.correct_spans << '\n';
  for (const auto& type : report.per_type) {
    out << "type." << type.type << ".gold=" << type.gold << '\n';
    out << "type." << type.type << ".predicted=" << type.predicted << '\n';
    out << "type." << type.type << ".correct=" << type.correct << '\n';
    out << "type." << type.type << ".f1=" << format_double(type.f1) << '\n';
  }
  out << "runs=" << report.run_f1.size() << '\n';
  for (std::size_t i = 0; i < report.run_f1.size(); ++i) {
    out << "run." << i + 1 << ".f1=" << format_double(report.run_f1[i]) << '\n';
  }
  out << "mean_f1=" << format_double(report.mean_f1) << '\n';
  out << "std_f1=" << format_double(report.std_f1) << '\n';
  out << "single_run=" << (report.single_run ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace xlner
