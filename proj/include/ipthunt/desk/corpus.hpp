#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ipthunt/core/types.hpp"
#include "ipthunt/learn/dataset.hpp"
#include "ipthunt/learn/multilabel.hpp"

namespace ipthunt::desk {

// A generated promotion text with the parts it was assembled from.
struct SyntheticIpt {
  std::string text;
  std::vector<CategoryLabel> categories;
  ContactKind contact_kind = ContactKind::Other;
  std::string contact_value;  // as extraction should report it
  std::string contact_phrase;  // indicator plus value as written
  std::string website;        // extra website contact, may be empty
};

struct BinarySample {
  std::string text;
  bool ipt = false;
};

struct SegmentSample {
  std::string text;
  bool contact = false;
};

struct TypedText {
  std::string text;
  ContactKind kind = ContactKind::Other;
};

// Keywords, an offer description and a contact, joined with brackets,
// emoji and punctuation in Chinese, English and a few other languages.
SyntheticIpt make_ipt(SplitMix64& rng);
SyntheticIpt make_ipt(SplitMix64& rng, CategoryLabel category, ContactKind contact);
// Search-query-like and sentence-like benign text that sites reflect.
std::string make_benign(SplitMix64& rng);

std::string make_handle(SplitMix64& rng, ContactKind kind);

std::vector<BinarySample> binary_corpus(std::size_t per_class, std::uint64_t seed);
std::vector<LabeledText> category_corpus(std::size_t per_label, std::uint64_t seed);
std::vector<SegmentSample> segment_corpus(std::size_t ipts, std::uint64_t seed);
std::vector<TypedText> contact_type_corpus(std::size_t per_kind, std::uint64_t seed);

// Keyword phrases per category, used by generators and keyword-rule oracles.
const std::vector<std::string>& category_keywords(CategoryLabel c);

}  // namespace ipthunt::desk
