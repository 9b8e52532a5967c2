#include "ipthunt/learn/tree_ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <thread>

#include "ipthunt/core/errors.hpp"

namespace ipthunt {

namespace {

constexpr double kTieEps = 1e-12;
constexpr int kModelVersion = 1;

double gini(const std::vector<double>& w, double total) {
  if (total <= 0) return 0.0;
  double s = 0;
  for (double x : w) s += (x / total) * (x / total);
  return 1.0 - s;
}

struct Split {
  bool found = false;
  std::int32_t feature = -1;
  double threshold = 0;
  double impurity = 0;  // weighted child impurity
};

// Grows one tree over a weighted subset of the dataset rows.
class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, std::vector<std::size_t> rows, std::vector<double> weights,
              std::size_t max_features, std::uint64_t seed)
      : data_(data),
        rows_(std::move(rows)),
        weights_(std::move(weights)),
        max_features_(max_features),
        rng_(seed),
        n_classes_(data.classes.size()) {
    build_columns();
    node_stamp_.assign(rows_.size(), 0);
    feature_stamp_.assign(data_.dimension, 0);
  }

  DecisionTree build() {
    DecisionTree tree;
    std::vector<std::uint32_t> order(rows_.size());
    std::iota(order.begin(), order.end(), 0);

    struct Pending {
      std::int32_t node;
      std::size_t begin;
      std::size_t end;
    };
    std::vector<Pending> stack;
    auto new_node = [&tree] {
      tree.feature.push_back(-1);
      tree.threshold.push_back(0);
      tree.left.push_back(-1);
      tree.right.push_back(-1);
      tree.value.emplace_back();
      return static_cast<std::int32_t>(tree.feature.size() - 1);
    };
    stack.push_back({new_node(), 0, order.size()});

    while (!stack.empty()) {
      const Pending p = stack.back();
      stack.pop_back();
      std::vector<double> totals(n_classes_, 0.0);
      for (std::size_t i = p.begin; i < p.end; ++i) totals[label(order[i])] += weights_[order[i]];
      const double total = std::accumulate(totals.begin(), totals.end(), 0.0);
      std::size_t nonzero_classes = 0;
      for (double t : totals) nonzero_classes += t > 0;

      Split split;
      if (nonzero_classes > 1 && p.end - p.begin >= 2)
        split = best_split(order, p.begin, p.end, totals, total);
      if (!split.found) {
        auto& v = tree.value[static_cast<std::size_t>(p.node)];
        v = totals;
        for (auto& x : v) x = total > 0 ? x / total : 1.0 / static_cast<double>(n_classes_);
        continue;
      }
      const auto mid = std::stable_partition(
          order.begin() + static_cast<std::ptrdiff_t>(p.begin),
          order.begin() + static_cast<std::ptrdiff_t>(p.end), [&](std::uint32_t s) {
            return row(s).at(static_cast<std::uint32_t>(split.feature)) <= split.threshold;
          });
      const auto m = static_cast<std::size_t>(mid - order.begin());
      const auto l = new_node();
      const auto r = new_node();
      const auto n = static_cast<std::size_t>(p.node);
      tree.feature[n] = split.feature;
      tree.threshold[n] = split.threshold;
      tree.left[n] = l;
      tree.right[n] = r;
      stack.push_back({r, m, p.end});
      stack.push_back({l, p.begin, m});
    }
    return tree;
  }

 private:
  const SparseVector& row(std::uint32_t local) const { return data_.rows[rows_[local]]; }
  std::size_t label(std::uint32_t local) const { return data_.labels[rows_[local]]; }

  void build_columns() {
    col_start_.assign(data_.dimension + 1, 0);
    for (std::size_t s = 0; s < rows_.size(); ++s)
      for (auto f : data_.rows[rows_[s]].index) ++col_start_[f + 1];
    for (std::size_t f = 0; f < data_.dimension; ++f) col_start_[f + 1] += col_start_[f];
    entries_.resize(col_start_.back());
    std::vector<std::size_t> fill(col_start_.begin(), col_start_.end() - 1);
    for (std::size_t s = 0; s < rows_.size(); ++s) {
      const auto& r = data_.rows[rows_[s]];
      for (std::size_t k = 0; k < r.index.size(); ++k)
        entries_[fill[r.index[k]]++] = {static_cast<std::uint32_t>(s), r.value[k]};
    }
  }

  Split best_split(const std::vector<std::uint32_t>& order, std::size_t begin, std::size_t end,
                   const std::vector<double>& totals, double total) {
    ++stamp_;
    std::vector<std::uint32_t> candidates;
    for (std::size_t i = begin; i < end; ++i) {
      node_stamp_[order[i]] = stamp_;
      for (auto f : row(order[i]).index) {
        if (feature_stamp_[f] != stamp_) {
          feature_stamp_[f] = stamp_;
          candidates.push_back(f);
        }
      }
    }
    // Features outside `candidates` are zero for every sample in the node.
    std::sort(candidates.begin(), candidates.end());

    Split best;
    std::size_t evaluated = 0;
    for (std::size_t k = 0; k < candidates.size() && evaluated < max_features_; ++k) {
      const auto pick = k + static_cast<std::size_t>(rng_.below(candidates.size() - k));
      std::swap(candidates[k], candidates[pick]);
      const Split s = evaluate(candidates[k], end - begin, totals, total);
      if (!s.found) continue;  // constant in this node
      ++evaluated;
      if (!best.found || s.impurity < best.impurity - kTieEps ||
          (std::abs(s.impurity - best.impurity) <= kTieEps &&
           (s.feature < best.feature || (s.feature == best.feature && s.threshold < best.threshold)))) {
        best = s;
      }
    }
    return best;
  }

  Split evaluate(std::uint32_t feature, std::size_t node_size, const std::vector<double>& totals,
                 double total) {
    struct Item {
      double value;
      std::uint32_t sample;
    };
    std::vector<Item> items;
    for (std::size_t e = col_start_[feature]; e < col_start_[feature + 1]; ++e)
      if (node_stamp_[entries_[e].first] == stamp_) items.push_back({entries_[e].second, entries_[e].first});
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
      return a.value < b.value || (a.value == b.value && a.sample < b.sample);
    });

    // Class weights of the implicit zero-valued group.
    std::vector<double> zero = totals;
    for (const auto& it : items) zero[label(it.sample)] -= weights_[it.sample];
    const bool has_zero = items.size() < node_size;

    // Groups of equal value in ascending order, the zero group merged in place.
    std::vector<double> group_values;
    std::vector<std::vector<double>> group_weights;
    bool zero_done = !has_zero;
    auto push_zero = [&] {
      group_values.push_back(0.0);
      group_weights.push_back(zero);
      zero_done = true;
    };
    for (const auto& it : items) {
      if (!zero_done && it.value > 0.0) push_zero();
      if (group_values.empty() || group_values.back() != it.value) {
        group_values.push_back(it.value);
        group_weights.emplace_back(n_classes_, 0.0);
      }
      group_weights.back()[label(it.sample)] += weights_[it.sample];
    }
    if (!zero_done) push_zero();

    Split best;
    if (group_values.size() < 2) return best;
    std::vector<double> left(n_classes_, 0.0);
    double left_total = 0;
    for (std::size_t g = 0; g + 1 < group_values.size(); ++g) {
      for (std::size_t c = 0; c < n_classes_; ++c) {
        left[c] += group_weights[g][c];
        left_total += group_weights[g][c];
      }
      std::vector<double> right(n_classes_);
      for (std::size_t c = 0; c < n_classes_; ++c) right[c] = totals[c] - left[c];
      const double right_total = total - left_total;
      const double impurity =
          (left_total * gini(left, left_total) + right_total * gini(right, right_total)) / total;
      if (!best.found || impurity < best.impurity - kTieEps) {
        double thr = (group_values[g] + group_values[g + 1]) / 2.0;
        if (thr >= group_values[g + 1]) thr = group_values[g];
        best = {true, static_cast<std::int32_t>(feature), thr, impurity};
      }
    }
    return best;
  }

  const Dataset& data_;
  std::vector<std::size_t> rows_;
  std::vector<double> weights_;
  std::size_t max_features_;
  SplitMix64 rng_;
  std::size_t n_classes_;
  std::vector<std::size_t> col_start_;
  std::vector<std::pair<std::uint32_t, double>> entries_;
  std::vector<std::uint32_t> node_stamp_;
  std::vector<std::uint32_t> feature_stamp_;
  std::uint32_t stamp_ = 0;
};

std::vector<double> class_weights(const Dataset& data, ClassWeight mode) {
  std::vector<double> w(data.classes.size(), 1.0);
  if (mode == ClassWeight::none) return w;
  std::vector<std::size_t> counts(data.classes.size(), 0);
  for (auto l : data.labels) ++counts[l];
  std::size_t present = 0;
  for (auto c : counts) present += c > 0;
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] > 0)
      w[c] = static_cast<double>(data.size()) / (static_cast<double>(present) * static_cast<double>(counts[c]));
  return w;
}

void check_dataset(const Dataset& data) {
  if (data.classes.size() < 2) throw DegenerateDataset("need at least two classes");
  if (data.rows.size() != data.labels.size()) throw DimensionMismatch("rows and labels differ in length");
  std::vector<bool> seen(data.classes.size(), false);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.labels[i] >= data.classes.size()) throw Error("label index out of range");
    seen[data.labels[i]] = true;
    const auto& r = data.rows[i];
    if (!r.index.empty() && r.index.back() >= data.dimension)
      throw DimensionMismatch("row " + std::to_string(i) + " exceeds dimension " +
                              std::to_string(data.dimension));
  }
  if (std::count(seen.begin(), seen.end(), true) < 2)
    throw DegenerateDataset("training data contains a single class");
}

template <typename Vec>
std::vector<double> average_leaves(const TreeEnsembleModel& m, const Vec& x) {
  // Running mean, so identical leaves average to exactly that leaf.
  std::vector<double> out(m.classes.size(), 0.0);
  double k = 0;
  for (const auto& t : m.trees) {
    const auto& leaf = t.leaf_for(x);
    k += 1;
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += (leaf[c] - out[c]) / k;
  }
  return out;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

const std::vector<double>& DecisionTree::leaf_for(const SparseVector& x) const {
  std::size_t n = 0;
  while (feature[n] >= 0)
    n = static_cast<std::size_t>(x.at(static_cast<std::uint32_t>(feature[n])) <= threshold[n] ? left[n] : right[n]);
  return value[n];
}

const std::vector<double>& DecisionTree::leaf_for(std::span<const double> x) const {
  std::size_t n = 0;
  while (feature[n] >= 0)
    n = static_cast<std::size_t>(x[static_cast<std::size_t>(feature[n])] <= threshold[n] ? left[n] : right[n]);
  return value[n];
}

std::vector<double> TreeEnsembleModel::predict_proba(const SparseVector& x) const {
  if (!x.index.empty() && x.index.back() >= dimension)
    throw DimensionMismatch("feature index outside model dimension");
  return average_leaves(*this, x);
}

std::vector<double> TreeEnsembleModel::predict_proba(std::span<const double> x) const {
  if (x.size() != dimension)
    throw DimensionMismatch("expected " + std::to_string(dimension) + " features, got " +
                            std::to_string(x.size()));
  return average_leaves(*this, x);
}

double TreeEnsembleModel::positive_proba(const SparseVector& x) const { return predict_proba(x).at(1); }
double TreeEnsembleModel::positive_proba(std::span<const double> x) const { return predict_proba(x).at(1); }
bool TreeEnsembleModel::classify(const SparseVector& x) const {
  return positive_proba(x) >= params.decision_threshold;
}
bool TreeEnsembleModel::classify(std::span<const double> x) const {
  return positive_proba(x) >= params.decision_threshold;
}
std::size_t TreeEnsembleModel::predict_class(std::span<const double> x) const { return argmax(predict_proba(x)); }
std::size_t TreeEnsembleModel::predict_class(const SparseVector& x) const { return argmax(predict_proba(x)); }

std::size_t TreeEnsembleModel::class_index(const std::string& name) const {
  const auto it = std::find(classes.begin(), classes.end(), name);
  if (it == classes.end()) throw Error("model has no class '" + name + "'");
  return static_cast<std::size_t>(it - classes.begin());
}

void TreeEnsembleModel::check_invariants() const {
  if (trees.empty() || params.n_estimators < 1) throw InvariantViolation("n_estimators >= 1");
  if (params.decision_threshold < 0 || params.decision_threshold > 1)
    throw InvariantViolation("decision_threshold in [0,1]");
  for (const auto& t : trees) {
    if (t.node_count() == 0) throw InvariantViolation("tree has a root");
    for (std::size_t n = 0; n < t.node_count(); ++n) {
      if (t.feature[n] >= 0) {
        if (static_cast<std::size_t>(t.feature[n]) >= dimension)
          throw InvariantViolation("split feature index < feature dimension");
        const auto l = t.left[n], r = t.right[n];
        if (l <= 0 || r <= 0 || static_cast<std::size_t>(l) >= t.node_count() ||
            static_cast<std::size_t>(r) >= t.node_count())
          throw InvariantViolation("child indices inside the tree");
      } else {
        if (t.value[n].size() != classes.size()) throw InvariantViolation("leaf has one probability per class");
        const double s = std::accumulate(t.value[n].begin(), t.value[n].end(), 0.0);
        if (std::abs(s - 1.0) > 1e-9) throw InvariantViolation("leaf probabilities sum to 1");
      }
    }
  }
}

nlohmann::json TreeEnsembleModel::to_json() const {
  nlohmann::json trees_json = nlohmann::json::array();
  for (const auto& t : trees) {
    nlohmann::json values = nlohmann::json::array();
    for (const auto& v : t.value) values.push_back(v);
    trees_json.push_back({{"feature", t.feature},
                          {"threshold", t.threshold},
                          {"left", t.left},
                          {"right", t.right},
                          {"value", values}});
  }
  return {{"format", "ipthunt-tree-ensemble"},
          {"version", kModelVersion},
          {"classes", classes},
          {"feature_order", feature_order},
          {"dimension", dimension},
          {"params",
           {{"n_estimators", params.n_estimators},
            {"split_criterion", "gini"},
            {"max_features", params.max_features},
            {"class_weight", params.class_weight == ClassWeight::balanced ? "balanced" : "none"},
            {"bootstrap", params.bootstrap},
            {"seed", params.seed},
            {"decision_threshold", params.decision_threshold}}},
          {"trees", trees_json}};
}

TreeEnsembleModel TreeEnsembleModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "ipthunt-tree-ensemble") throw ModelFormatError("not a tree-ensemble model");
    if (j.at("version").get<int>() != kModelVersion)
      throw ModelFormatError("unsupported model version " + j.at("version").dump());
    TreeEnsembleModel m;
    m.classes = j.at("classes").get<std::vector<std::string>>();
    m.feature_order = j.at("feature_order").get<std::vector<std::string>>();
    m.dimension = j.at("dimension").get<std::size_t>();
    const auto& p = j.at("params");
    m.params.n_estimators = p.at("n_estimators").get<std::size_t>();
    m.params.max_features = p.at("max_features").get<std::size_t>();
    m.params.class_weight = p.at("class_weight") == "balanced" ? ClassWeight::balanced : ClassWeight::none;
    m.params.bootstrap = p.at("bootstrap").get<bool>();
    m.params.seed = p.at("seed").get<std::uint64_t>();
    m.params.decision_threshold = p.at("decision_threshold").get<double>();
    for (const auto& tj : j.at("trees")) {
      DecisionTree t;
      t.feature = tj.at("feature").get<std::vector<std::int32_t>>();
      t.threshold = tj.at("threshold").get<std::vector<double>>();
      t.left = tj.at("left").get<std::vector<std::int32_t>>();
      t.right = tj.at("right").get<std::vector<std::int32_t>>();
      t.value = tj.at("value").get<std::vector<std::vector<double>>>();
      const auto n = t.feature.size();
      if (t.threshold.size() != n || t.left.size() != n || t.right.size() != n || t.value.size() != n)
        throw ModelFormatError("tree arrays differ in length");
      m.trees.push_back(std::move(t));
    }
    m.check_invariants();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("bad model json: ") + e.what());
  }
}

void TreeEnsembleModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StorageIoError("cannot write model " + path);
  out << to_json().dump() << '\n';
}

TreeEnsembleModel TreeEnsembleModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageIoError("cannot read model " + path);
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelFormatError(path + ": " + e.what());
  }
}

TreeEnsembleModel train_tree_ensemble(const Dataset& data, const EnsembleParams& params,
                                      std::vector<std::string> feature_order) {
  check_dataset(data);
  if (params.n_estimators < 1) throw InvariantViolation("n_estimators >= 1");
  if (!feature_order.empty() && feature_order.size() != data.dimension)
    throw DimensionMismatch("feature_order length differs from dimension");

  TreeEnsembleModel model;
  model.params = params;
  model.classes = data.classes;
  model.dimension = data.dimension;
  model.feature_order = std::move(feature_order);
  if (model.params.max_features == 0)
    model.params.max_features =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(data.dimension))));
  const std::size_t max_features = std::min(model.params.max_features, data.dimension);

  const auto cw = class_weights(data, params.class_weight);
  const std::size_t n = data.size();

  // Per-tree seeds are drawn up front so the result does not depend on how
  // trees are scheduled across threads.
  SplitMix64 seeder(params.seed);
  std::vector<std::uint64_t> seeds(params.n_estimators);
  for (auto& s : seeds) s = seeder.next();

  model.trees.resize(params.n_estimators);
  auto grow = [&](std::size_t t) {
    SplitMix64 rng(seeds[t]);
    std::vector<std::size_t> counts(n, 0);
    if (params.bootstrap) {
      for (std::size_t k = 0; k < n; ++k) ++counts[rng.below(n)];
    } else {
      std::fill(counts.begin(), counts.end(), 1);
    }
    std::vector<std::size_t> rows;
    std::vector<double> weights;
    for (std::size_t i = 0; i < n; ++i) {
      if (counts[i] == 0) continue;
      rows.push_back(i);
      weights.push_back(static_cast<double>(counts[i]) * cw[data.labels[i]]);
    }
    model.trees[t] = TreeBuilder(data, std::move(rows), std::move(weights), max_features, rng.next()).build();
  };

  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), params.n_estimators));
  if (workers == 1) {
    for (std::size_t t = 0; t < params.n_estimators; ++t) grow(t);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < params.n_estimators; t += workers) grow(t);
      });
  }
  return model;
}

DecisionTree train_decision_tree(const Dataset& data, ClassWeight class_weight,
                                 std::size_t max_features, std::uint64_t seed) {
  check_dataset(data);
  const auto cw = class_weights(data, class_weight);
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), 0);
  std::vector<double> weights;
  for (auto l : data.labels) weights.push_back(cw[l]);
  if (max_features == 0) max_features = data.dimension;
  return TreeBuilder(data, std::move(rows), std::move(weights), std::min(max_features, data.dimension), seed)
      .build();
}

}  // namespace ipthunt
