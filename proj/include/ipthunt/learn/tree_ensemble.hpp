#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipthunt/learn/dataset.hpp"

namespace ipthunt {

enum class ClassWeight { none, balanced };

struct EnsembleParams {
  std::size_t n_estimators = 91;
  // Features drawn per split; 0 means floor(sqrt(dimension)).
  std::size_t max_features = 1;
  ClassWeight class_weight = ClassWeight::balanced;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  double decision_threshold = 0.5;
  bool operator==(const EnsembleParams&) const = default;
};

// Binary decision tree in array form. Node 0 is the root; a node with
// feature == -1 is a leaf whose `value` is a class-probability vector.
// Samples with x[feature] <= threshold go left.
struct DecisionTree {
  std::vector<std::int32_t> feature;
  std::vector<double> threshold;
  std::vector<std::int32_t> left;
  std::vector<std::int32_t> right;
  std::vector<std::vector<double>> value;

  std::size_t node_count() const { return feature.size(); }
  const std::vector<double>& leaf_for(const SparseVector& x) const;
  const std::vector<double>& leaf_for(std::span<const double> x) const;
  bool operator==(const DecisionTree&) const = default;
};

struct TreeEnsembleModel {
  std::vector<DecisionTree> trees;
  EnsembleParams params;
  std::vector<std::string> feature_order;
  std::vector<std::string> classes;
  std::size_t dimension = 0;

  // Mean of the leaf distributions reached in every tree.
  std::vector<double> predict_proba(const SparseVector& x) const;
  std::vector<double> predict_proba(std::span<const double> x) const;
  // Probability of class index 1 (the positive class of a binary model).
  double positive_proba(const SparseVector& x) const;
  double positive_proba(std::span<const double> x) const;
  // positive_proba >= decision_threshold.
  bool classify(const SparseVector& x) const;
  bool classify(std::span<const double> x) const;
  // Index of the most probable class; ties go to the lower index.
  std::size_t predict_class(std::span<const double> x) const;
  std::size_t predict_class(const SparseVector& x) const;

  std::size_t class_index(const std::string& name) const;

  nlohmann::json to_json() const;
  static TreeEnsembleModel from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static TreeEnsembleModel load(const std::string& path);

  // Throws InvariantViolation when a structural invariant fails.
  void check_invariants() const;
  bool operator==(const TreeEnsembleModel&) const = default;
};

// Random forest of gini CART trees grown without depth limit
// (min_samples_split 2, min_samples_leaf 1). Deterministic for a given
// params.seed. Throws DegenerateDataset when fewer than two classes are
// present and DimensionMismatch on inconsistent rows.
TreeEnsembleModel train_tree_ensemble(const Dataset& data, const EnsembleParams& params,
                                      std::vector<std::string> feature_order = {});

// A single CART tree on the full sample with weights 1 (or balanced class
// weights), every feature considered at each split.
DecisionTree train_decision_tree(const Dataset& data, ClassWeight class_weight,
                                 std::size_t max_features, std::uint64_t seed);

}  // namespace ipthunt
