#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace ipthunt {

struct ClassMetrics {
  std::string label;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t support() const { return tp + fn; }
};

struct EvalReport {
  std::vector<ClassMetrics> per_class;
  double micro_precision = 0;
  double micro_recall = 0;
  double micro_f1 = 0;
  double lrap = 0;
  std::size_t samples = 0;

  const ClassMetrics& for_label(const std::string& label) const;
  nlohmann::json to_json() const;
};

// Precision, recall and F1 from counts; a zero denominator yields 0.
void finish_metrics(ClassMetrics& m);

// Ranking average precision of one sample. Ties count as ranked above.
// A sample with no true labels, or with every label true, scores 1.
double lrap_sample(const std::vector<bool>& truth, const std::vector<double>& scores);
// Mean of lrap_sample over samples.
double lrap(const std::vector<std::vector<bool>>& truth, const std::vector<std::vector<double>>& scores);

// Multi-label evaluation. Rows are samples, columns follow `labels`.
// `scores` may be empty, in which case lrap is computed from `predicted`.
// Throws EmptyEvaluationSet when there are no samples.
EvalReport evaluate_multilabel(const std::vector<std::string>& labels,
                               const std::vector<std::vector<bool>>& truth,
                               const std::vector<std::vector<bool>>& predicted,
                               const std::vector<std::vector<double>>& scores = {});

// Binary evaluation reported for the positive class only.
EvalReport evaluate_binary(const std::vector<bool>& truth, const std::vector<bool>& predicted,
                           const std::vector<double>& scores = {});

}  // namespace ipthunt
