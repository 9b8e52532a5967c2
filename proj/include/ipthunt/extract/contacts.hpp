#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ipthunt/core/types.hpp"
#include "ipthunt/extract/normalize.hpp"
#include "ipthunt/learn/tree_ensemble.hpp"

namespace ipthunt {

struct IndicatorHit {
  ContactKind kind = ContactKind::Other;
  std::size_t start = 0;
  std::size_t end = 0;
};

// Lowercase indicator tokens and the contact kind each one announces.
const std::vector<std::pair<std::u32string, ContactKind>>& contact_kind_indicators();

// Longest-first, non-overlapping indicator hits, case-insensitive. Latin
// indicators must not follow an ASCII letter. Text inside URLs is skipped.
std::vector<IndicatorHit> find_indicators(std::u32string_view text);

// Evidence counts the contact-type classifier sees.
struct ContactTypeFeatures {
  std::size_t telegram_indicators = 0;
  std::size_t wechat_indicators = 0;
  std::size_t qq_indicators = 0;
  std::size_t phone_indicators = 0;
  std::size_t at_handles = 0;
  std::size_t url_count = 0;
  std::size_t longest_digit_run = 0;
  std::size_t plus_digit_runs = 0;
  std::size_t latin_id_tokens = 0;

  static constexpr std::size_t kDimension = 9;
  std::array<double, kDimension> to_array() const;
  static const std::vector<std::string>& names();
  // Any indicator, handle or URL, or a digit run of five or more.
  bool has_evidence() const;
};

ContactTypeFeatures contact_type_features(std::string_view text);

// Class names of a contact-type model are ContactKind names.
ContactKind classify_contact_type(std::string_view text, const TreeEnsembleModel& type_model);

// Contacts of one kind in already-normalized text. Spans index `text`.
std::vector<Contact> extract_contact_entities(std::string_view text, ContactKind kind);

// normalize_evasions, classify_contact_type, extract_contact_entities, plus
// every Website contact. Spans index the input text; contacts are unique by
// (kind, value) and ordered by position.
std::vector<Contact> extract_contacts(std::string_view text, const TreeEnsembleModel& type_model,
                                      const std::string& source_ipt = {},
                                      const ConfusableMap& confusables = ConfusableMap::builtin());
std::vector<Contact> extract_contacts(const IptRecord& ipt, const TreeEnsembleModel& type_model,
                                      const ConfusableMap& confusables = ConfusableMap::builtin());

}  // namespace ipthunt
