#include "ipthunt/learn/multilabel.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include "ipthunt/core/errors.hpp"
#include "ipthunt/core/text.hpp"
#include "ipthunt/textfeat/features.hpp"

namespace ipthunt {

namespace {

constexpr int kModelVersion = 1;

std::uint32_t fnv1a(std::string_view bytes) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

bool contains(const std::vector<CategoryLabel>& v, CategoryLabel c) {
  return std::find(v.begin(), v.end(), c) != v.end();
}

}  // namespace

std::vector<LabeledText> read_labeled_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageIoError("cannot read " + path);
  std::vector<LabeledText> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      LabeledText t;
      t.text = j.at("text").get<std::string>();
      for (const auto& l : j.at("labels")) t.labels.push_back(category_from_string(l.get<std::string>()));
      out.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw Error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::size_t text_feature_dimension(unsigned hash_bits) {
  return (std::size_t{1} << hash_bits) + BinaryIptFeatures::kDimension;
}

SparseVector text_features(std::string_view text, unsigned hash_bits) {
  const std::uint32_t mask = (std::uint32_t{1} << hash_bits) - 1;
  const auto chars = simple_lower(to_u32(normalize_ipt_text(text)));
  std::unordered_map<std::uint32_t, double> counts;
  for (std::size_t i = 0; i < chars.size(); ++i)
    for (std::size_t n = 1; n <= 3 && i + n <= chars.size(); ++n)
      counts[fnv1a(to_utf8(std::u32string_view(chars).substr(i, n))) & mask] += 1.0;
  std::vector<std::pair<std::uint32_t, double>> items(counts.begin(), counts.end());
  std::sort(items.begin(), items.end());
  SparseVector v;
  for (const auto& [i, c] : items) {
    v.index.push_back(i);
    v.value.push_back(c);
  }
  const auto extra = binary_ipt_features(text).to_array();
  for (std::size_t k = 0; k < extra.size(); ++k) {
    if (extra[k] == 0) continue;
    v.index.push_back(static_cast<std::uint32_t>((std::size_t{1} << hash_bits) + k));
    v.value.push_back(extra[k]);
  }
  return v;
}

std::vector<double> MultiLabelModel::scores(std::string_view text) const {
  const auto x = text_features(text, hash_bits);
  std::vector<double> out;
  for (const auto& m : per_label) out.push_back(m.positive_proba(x));
  return out;
}

std::vector<CategoryLabel> MultiLabelModel::assign(const std::vector<double>& s) const {
  std::vector<CategoryLabel> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (s[i] >= threshold) out.push_back(labels[i]);
  const bool has_illicit = std::any_of(out.begin(), out.end(), is_illicit);
  if (has_illicit) std::erase(out, CategoryLabel::Benign);
  if (out.empty() && !labels.empty())
    out.push_back(labels[static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin())]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CategoryLabel> MultiLabelModel::classify(std::string_view text) const { return assign(scores(text)); }

nlohmann::json MultiLabelModel::to_json() const {
  nlohmann::json names = nlohmann::json::array();
  for (auto l : labels) names.push_back(std::string(to_string(l)));
  nlohmann::json models = nlohmann::json::array();
  for (const auto& m : per_label) models.push_back(m.to_json());
  return {{"format", "ipthunt-multilabel"},
          {"version", kModelVersion},
          {"labels", names},
          {"hash_bits", hash_bits},
          {"threshold", threshold},
          {"models", models}};
}

MultiLabelModel MultiLabelModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "ipthunt-multilabel") throw ModelFormatError("not a multi-label model");
    if (j.at("version").get<int>() != kModelVersion)
      throw ModelFormatError("unsupported model version " + j.at("version").dump());
    MultiLabelModel m;
    for (const auto& l : j.at("labels")) m.labels.push_back(category_from_string(l.get<std::string>()));
    m.hash_bits = j.at("hash_bits").get<unsigned>();
    m.threshold = j.at("threshold").get<double>();
    for (const auto& mj : j.at("models")) m.per_label.push_back(TreeEnsembleModel::from_json(mj));
    if (m.per_label.size() != m.labels.size()) throw ModelFormatError("one model per label expected");
    if (m.hash_bits == 0 || m.hash_bits > 24) throw ModelFormatError("hash_bits out of range");
    for (const auto& e : m.per_label)
      if (e.dimension != text_feature_dimension(m.hash_bits))
        throw ModelFormatError("per-label model dimension differs from the hashed feature space");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("bad model json: ") + e.what());
  }
}

void MultiLabelModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StorageIoError("cannot write model " + path);
  out << to_json().dump() << '\n';
}

MultiLabelModel MultiLabelModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageIoError("cannot read model " + path);
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelFormatError(path + ": " + e.what());
  }
}

MultiLabelModel train_multilabel(const std::vector<LabeledText>& corpus, const MultiLabelParams& params,
                                 std::optional<std::vector<CategoryLabel>> required) {
  std::vector<std::size_t> support(kCategoryCount, 0);
  for (const auto& s : corpus) {
    std::vector<CategoryLabel> seen;
    for (auto l : s.labels)
      if (!contains(seen, l)) seen.push_back(l);
    for (auto l : seen) ++support[static_cast<std::size_t>(l)];
  }
  std::vector<CategoryLabel> labels;
  if (required) {
    labels = *required;
  } else {
    for (auto c : all_categories())
      if (support[static_cast<std::size_t>(c)] > 0) labels.push_back(c);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  if (labels.empty()) throw DegenerateDataset("no labels to train");
  for (auto l : labels) {
    const auto n = support[static_cast<std::size_t>(l)];
    if (n < params.min_support) throw InsufficientLabelSupport(std::string(to_string(l)), n, params.min_support);
  }
  if (params.hash_bits == 0 || params.hash_bits > 24) throw Error("hash_bits must be in [1, 24]");

  std::vector<SparseVector> rows;
  rows.reserve(corpus.size());
  for (const auto& s : corpus) rows.push_back(text_features(s.text, params.hash_bits));

  MultiLabelModel model;
  model.labels = labels;
  model.hash_bits = params.hash_bits;
  model.threshold = params.ensemble.decision_threshold;
  for (std::size_t li = 0; li < labels.size(); ++li) {
    Dataset data;
    data.dimension = text_feature_dimension(params.hash_bits);
    data.classes = {"other", std::string(to_string(labels[li]))};
    // Each label's trees see only the n-grams that occur in its own positive
    // samples, so they split on evidence for the label rather than against it.
    std::vector<bool> vocabulary(data.dimension, false);
    for (std::size_t k = 0; k < BinaryIptFeatures::kDimension; ++k)
      vocabulary[(std::size_t{1} << params.hash_bits) + k] = true;
    for (std::size_t i = 0; i < corpus.size(); ++i)
      if (contains(corpus[i].labels, labels[li]))
        for (auto f : rows[i].index) vocabulary[f] = true;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      SparseVector r;
      for (std::size_t k = 0; k < rows[i].index.size(); ++k) {
        if (!vocabulary[rows[i].index[k]]) continue;
        r.index.push_back(rows[i].index[k]);
        r.value.push_back(rows[i].value[k]);
      }
      data.add(std::move(r), contains(corpus[i].labels, labels[li]) ? 1 : 0);
    }
    EnsembleParams p = params.ensemble;
    p.seed = params.ensemble.seed + li;
    model.per_label.push_back(train_tree_ensemble(data, p));
  }
  return model;
}

EvalReport evaluate(const MultiLabelModel& model, const std::vector<LabeledText>& heldout) {
  if (heldout.empty()) throw EmptyEvaluationSet();
  std::vector<std::string> names;
  for (auto l : model.labels) names.emplace_back(to_string(l));
  std::vector<std::vector<bool>> truth, predicted;
  std::vector<std::vector<double>> scores;
  for (const auto& s : heldout) {
    std::vector<bool> t(model.labels.size(), false);
    for (auto l : s.labels) {
      const auto it = std::find(model.labels.begin(), model.labels.end(), l);
      if (it == model.labels.end()) throw Error("held-out label '" + std::string(to_string(l)) + "' unknown to model");
      t[static_cast<std::size_t>(it - model.labels.begin())] = true;
    }
    auto sc = model.scores(s.text);
    const auto assigned = model.assign(sc);
    std::vector<bool> p(model.labels.size(), false);
    for (std::size_t i = 0; i < model.labels.size(); ++i) p[i] = contains(assigned, model.labels[i]);
    truth.push_back(std::move(t));
    predicted.push_back(std::move(p));
    scores.push_back(std::move(sc));
  }
  return evaluate_multilabel(names, truth, predicted, scores);
}

}  // namespace ipthunt
