#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ipthunt/desk/corpus.hpp"
#include "ipthunt/learn/metrics.hpp"
#include "ipthunt/learn/multilabel.hpp"
#include "ipthunt/learn/tree_ensemble.hpp"

namespace ipthunt::desk {

Dataset binary_dataset(const std::vector<BinarySample>& samples);
Dataset segment_dataset(const std::vector<SegmentSample>& samples);
Dataset contact_type_dataset(const std::vector<TypedText>& samples);

TreeEnsembleModel train_binary_model(const std::vector<BinarySample>& samples, const EnsembleParams& params = {});
TreeEnsembleModel train_segment_model(const std::vector<SegmentSample>& samples, const EnsembleParams& params = {});
TreeEnsembleModel train_contact_type_model(const std::vector<TypedText>& samples, const EnsembleParams& params = {});

struct ModelBundle {
  TreeEnsembleModel binary;        // BinaryIptFeatures -> {benign, ipt}
  TreeEnsembleModel segment;       // ContactSegmentFeatures -> {other, contact}
  TreeEnsembleModel contact_type;  // ContactTypeFeatures -> ContactKind names
  MultiLabelModel categories;
};

// Files binary.json, segment.json, contact_type.json and categories.json.
void save_bundle(const ModelBundle& bundle, const std::filesystem::path& dir);
ModelBundle load_bundle(const std::filesystem::path& dir);

// JSON-lines readers: {"text", "ipt": bool}, {"text", "contact": bool} and
// {"text", "kind": ContactKind name}.
std::vector<BinarySample> read_binary_samples(const std::filesystem::path& file);
std::vector<SegmentSample> read_segment_samples(const std::filesystem::path& file);
std::vector<TypedText> read_typed_samples(const std::filesystem::path& file);

// k-fold cross-validated metrics of the binary classifier (positive class),
// pooled over folds.
EvalReport cross_validate_binary(const std::vector<BinarySample>& samples, std::size_t folds,
                                 const EnsembleParams& params = {}, std::uint64_t fold_seed = 1);

// Trains every model on the desk corpora with the given seed.
ModelBundle train_default_models(std::uint64_t seed = 7);
// Process-wide bundle for seed 7, trained on first use.
const ModelBundle& default_models();

}  // namespace ipthunt::desk
