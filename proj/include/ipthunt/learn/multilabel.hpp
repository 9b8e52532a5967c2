#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ipthunt/core/types.hpp"
#include "ipthunt/learn/dataset.hpp"
#include "ipthunt/learn/metrics.hpp"
#include "ipthunt/learn/tree_ensemble.hpp"

namespace ipthunt {

struct LabeledText {
  std::string text;
  std::vector<CategoryLabel> labels;
};

// Reads JSON lines of the form {"text": ..., "labels": [...]}.
std::vector<LabeledText> read_labeled_jsonl(const std::string& path);

// Text to label-set contract shared by every category classifier.
class LabelClassifier {
 public:
  virtual ~LabelClassifier() = default;
  virtual std::vector<CategoryLabel> classify(std::string_view text) const = 0;
};

inline constexpr unsigned kDefaultHashBits = 15;

// Hashed character 1..3-gram counts of the normalized, lowercased text in
// [0, 2^hash_bits), followed by the binary IPT features.
SparseVector text_features(std::string_view text, unsigned hash_bits = kDefaultHashBits);
std::size_t text_feature_dimension(unsigned hash_bits = kDefaultHashBits);

struct MultiLabelParams {
  EnsembleParams ensemble{.n_estimators = 91, .max_features = 0};
  std::size_t min_support = 5;
  unsigned hash_bits = kDefaultHashBits;
};

class MultiLabelModel : public LabelClassifier {
 public:
  std::vector<CategoryLabel> labels;
  unsigned hash_bits = kDefaultHashBits;
  double threshold = 0.5;
  std::vector<TreeEnsembleModel> per_label;

  // Positive-class probability per entry of `labels`.
  std::vector<double> scores(std::string_view text) const;
  // Labels at or above threshold. Benign is dropped when an illicit label
  // also qualifies. With nothing qualifying, the single best label.
  std::vector<CategoryLabel> assign(const std::vector<double>& scores) const;
  std::vector<CategoryLabel> classify(std::string_view text) const override;

  nlohmann::json to_json() const;
  static MultiLabelModel from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static MultiLabelModel load(const std::string& path);
};

// One-vs-rest training. `required` defaults to every label seen in the
// corpus; each must occur at least params.min_support times, otherwise
// InsufficientLabelSupport names the first short label.
MultiLabelModel train_multilabel(const std::vector<LabeledText>& corpus, const MultiLabelParams& params = {},
                                 std::optional<std::vector<CategoryLabel>> required = std::nullopt);

// Throws EmptyEvaluationSet on an empty set and Error when a held-out label
// is unknown to the model.
EvalReport evaluate(const MultiLabelModel& model, const std::vector<LabeledText>& heldout);

}  // namespace ipthunt
