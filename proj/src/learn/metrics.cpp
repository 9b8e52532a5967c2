#include "ipthunt/learn/metrics.hpp"

#include "ipthunt/core/errors.hpp"

namespace ipthunt {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double f1_of(double p, double r) { return p + r == 0 ? 0.0 : 2 * p * r / (p + r); }

std::vector<double> as_scores(const std::vector<bool>& v) {
  std::vector<double> out;
  for (bool b : v) out.push_back(b ? 1.0 : 0.0);
  return out;
}

}  // namespace

const ClassMetrics& EvalReport::for_label(const std::string& label) const {
  for (const auto& m : per_class)
    if (m.label == label) return m;
  throw Error("no metrics for label '" + label + "'");
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& m : per_class)
    classes.push_back({{"label", m.label},
                       {"precision", m.precision},
                       {"recall", m.recall},
                       {"f1", m.f1},
                       {"tp", m.tp},
                       {"fp", m.fp},
                       {"fn", m.fn},
                       {"tn", m.tn},
                       {"support", m.support()}});
  return {{"samples", samples},
          {"micro_precision", micro_precision},
          {"micro_recall", micro_recall},
          {"micro_f1", micro_f1},
          {"lrap", lrap},
          {"per_class", classes}};
}

void finish_metrics(ClassMetrics& m) {
  m.precision = ratio(m.tp, m.tp + m.fp);
  m.recall = ratio(m.tp, m.tp + m.fn);
  m.f1 = f1_of(m.precision, m.recall);
}

double lrap_sample(const std::vector<bool>& truth, const std::vector<double>& scores) {
  if (truth.size() != scores.size()) throw DimensionMismatch("truth and scores differ in length");
  std::size_t positives = 0;
  for (bool t : truth) positives += t;
  if (positives == 0 || positives == truth.size()) return 1.0;
  double sum = 0;
  for (std::size_t j = 0; j < truth.size(); ++j) {
    if (!truth[j]) continue;
    std::size_t rank = 0, true_rank = 0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
      if (scores[k] >= scores[j]) {
        ++rank;
        true_rank += truth[k];
      }
    }
    sum += static_cast<double>(true_rank) / static_cast<double>(rank);
  }
  return sum / static_cast<double>(positives);
}

double lrap(const std::vector<std::vector<bool>>& truth, const std::vector<std::vector<double>>& scores) {
  if (truth.empty()) throw EmptyEvaluationSet();
  if (truth.size() != scores.size()) throw DimensionMismatch("truth and scores differ in length");
  double sum = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) sum += lrap_sample(truth[i], scores[i]);
  return sum / static_cast<double>(truth.size());
}

EvalReport evaluate_multilabel(const std::vector<std::string>& labels,
                               const std::vector<std::vector<bool>>& truth,
                               const std::vector<std::vector<bool>>& predicted,
                               const std::vector<std::vector<double>>& scores) {
  if (truth.empty()) throw EmptyEvaluationSet();
  if (truth.size() != predicted.size() || (!scores.empty() && scores.size() != truth.size()))
    throw DimensionMismatch("truth, predictions and scores differ in length");
  EvalReport report;
  report.samples = truth.size();
  report.per_class.resize(labels.size());
  for (std::size_t c = 0; c < labels.size(); ++c) report.per_class[c].label = labels[c];
  std::vector<std::vector<double>> ranking;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i].size() != labels.size() || predicted[i].size() != labels.size())
      throw DimensionMismatch("sample " + std::to_string(i) + " has the wrong label count");
    for (std::size_t c = 0; c < labels.size(); ++c) {
      auto& m = report.per_class[c];
      const bool t = truth[i][c], p = predicted[i][c];
      if (t && p) ++m.tp;
      else if (!t && p) ++m.fp;
      else if (t && !p) ++m.fn;
      else ++m.tn;
    }
    ranking.push_back(scores.empty() ? as_scores(predicted[i]) : scores[i]);
  }
  ClassMetrics pooled;
  for (auto& m : report.per_class) {
    finish_metrics(m);
    pooled.tp += m.tp;
    pooled.fp += m.fp;
    pooled.fn += m.fn;
  }
  finish_metrics(pooled);
  report.micro_precision = pooled.precision;
  report.micro_recall = pooled.recall;
  report.micro_f1 = pooled.f1;
  report.lrap = lrap(truth, ranking);
  return report;
}

EvalReport evaluate_binary(const std::vector<bool>& truth, const std::vector<bool>& predicted,
                           const std::vector<double>& scores) {
  if (truth.empty()) throw EmptyEvaluationSet();
  if (truth.size() != predicted.size()) throw DimensionMismatch("truth and predictions differ in length");
  std::vector<std::vector<bool>> t, p;
  std::vector<std::vector<double>> s;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    t.push_back({static_cast<bool>(truth[i])});
    p.push_back({static_cast<bool>(predicted[i])});
    if (!scores.empty()) s.push_back({scores.at(i)});
  }
  return evaluate_multilabel({"positive"}, t, p, s);
}

}  // namespace ipthunt
