#include "ipthunt/desk/models.hpp"

#include <fstream>
#include <mutex>

#include <json.hpp>

#include "ipthunt/core/errors.hpp"

#include "ipthunt/extract/contacts.hpp"
#include "ipthunt/extract/normalize.hpp"
#include "ipthunt/textfeat/features.hpp"

namespace ipthunt::desk {

namespace {

const std::vector<std::string>& contact_type_classes() {
  static const std::vector<std::string> c{"Website", "Telegram", "WeChat", "QQ", "Phone", "Other"};
  return c;
}

}  // namespace

Dataset binary_dataset(const std::vector<BinarySample>& samples) {
  Dataset d;
  d.dimension = BinaryIptFeatures::kDimension;
  d.classes = {"benign", "ipt"};
  for (const auto& s : samples) {
    const auto x = binary_ipt_features(s.text).to_array();
    d.add_dense(x, s.ipt ? 1 : 0);
  }
  return d;
}

Dataset segment_dataset(const std::vector<SegmentSample>& samples) {
  Dataset d;
  d.dimension = ContactSegmentFeatures::kDimension;
  d.classes = {"other", "contact"};
  for (const auto& s : samples) {
    const auto x = contact_segment_features(s.text).to_array();
    d.add_dense(x, s.contact ? 1 : 0);
  }
  return d;
}

Dataset contact_type_dataset(const std::vector<TypedText>& samples) {
  Dataset d;
  d.dimension = ContactTypeFeatures::kDimension;
  d.classes = contact_type_classes();
  for (const auto& s : samples) {
    const auto x = contact_type_features(normalize_evasions(s.text).normalized_text).to_array();
    d.add_dense(x, static_cast<std::size_t>(s.kind));
  }
  return d;
}

TreeEnsembleModel train_binary_model(const std::vector<BinarySample>& samples, const EnsembleParams& params) {
  return train_tree_ensemble(binary_dataset(samples), params, BinaryIptFeatures::names());
}

TreeEnsembleModel train_segment_model(const std::vector<SegmentSample>& samples, const EnsembleParams& params) {
  return train_tree_ensemble(segment_dataset(samples), params, ContactSegmentFeatures::names());
}

TreeEnsembleModel train_contact_type_model(const std::vector<TypedText>& samples, const EnsembleParams& params) {
  return train_tree_ensemble(contact_type_dataset(samples), params, ContactTypeFeatures::names());
}

ModelBundle train_default_models(std::uint64_t seed) {
  ModelBundle b;
  EnsembleParams p;
  p.seed = seed;
  b.binary = train_binary_model(binary_corpus(400, seed), p);
  b.segment = train_segment_model(segment_corpus(300, seed + 1), p);
  b.contact_type = train_contact_type_model(contact_type_corpus(60, seed + 2), p);
  MultiLabelParams mp;
  mp.ensemble.seed = seed;
  b.categories = train_multilabel(category_corpus(48, seed + 3), mp);
  return b;
}

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw StorageIoError("cannot create " + dir.string() + ": " + ec.message());
  bundle.binary.save((dir / "binary.json").string());
  bundle.segment.save((dir / "segment.json").string());
  bundle.contact_type.save((dir / "contact_type.json").string());
  bundle.categories.save((dir / "categories.json").string());
}

ModelBundle load_bundle(const std::filesystem::path& dir) {
  ModelBundle b;
  b.binary = TreeEnsembleModel::load((dir / "binary.json").string());
  b.segment = TreeEnsembleModel::load((dir / "segment.json").string());
  b.contact_type = TreeEnsembleModel::load((dir / "contact_type.json").string());
  b.categories = MultiLabelModel::load((dir / "categories.json").string());
  return b;
}

namespace {

template <typename Fn>
void for_each_json_line(const std::filesystem::path& file, Fn&& fn) {
  std::ifstream in(file);
  if (!in) throw StorageIoError("cannot read " + file.string());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw Error(file.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

}  // namespace

std::vector<BinarySample> read_binary_samples(const std::filesystem::path& file) {
  std::vector<BinarySample> out;
  for_each_json_line(file, [&](const nlohmann::json& j) {
    out.push_back({j.at("text").get<std::string>(), j.at("ipt").get<bool>()});
  });
  return out;
}

std::vector<SegmentSample> read_segment_samples(const std::filesystem::path& file) {
  std::vector<SegmentSample> out;
  for_each_json_line(file, [&](const nlohmann::json& j) {
    out.push_back({j.at("text").get<std::string>(), j.at("contact").get<bool>()});
  });
  return out;
}

std::vector<TypedText> read_typed_samples(const std::filesystem::path& file) {
  std::vector<TypedText> out;
  for_each_json_line(file, [&](const nlohmann::json& j) {
    out.push_back({j.at("text").get<std::string>(), contact_kind_from_string(j.at("kind").get<std::string>())});
  });
  return out;
}

EvalReport cross_validate_binary(const std::vector<BinarySample>& samples, std::size_t folds,
                                 const EnsembleParams& params, std::uint64_t fold_seed) {
  if (folds < 2) throw Error("cross-validation needs at least two folds");
  const auto fold = fold_assignment(samples.size(), folds, fold_seed);
  std::vector<bool> truth, predicted;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<BinarySample> train, test;
    for (std::size_t i = 0; i < samples.size(); ++i) (fold[i] == f ? test : train).push_back(samples[i]);
    const auto model = train_binary_model(train, params);
    for (const auto& s : test) {
      truth.push_back(s.ipt);
      predicted.push_back(model.classify(binary_ipt_features(s.text).to_array()));
    }
  }
  return evaluate_binary(truth, predicted);
}

const ModelBundle& default_models() {
  static const ModelBundle bundle = train_default_models(7);
  return bundle;
}

}  // namespace ipthunt::desk
