#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ipthunt {

struct BinaryIptFeatures {
  std::size_t char_len = 0;
  std::size_t bracket_count = 0;
  std::size_t url_count = 0;
  std::size_t digit_count = 0;
  std::size_t symbol_count = 0;
  std::size_t im_pattern_count = 0;
  bool has_file_suffix = false;

  static constexpr std::size_t kDimension = 7;
  // [char_len, bracket_count, url_count, digit_count, symbol_count,
  //  im_pattern_count, has_file_suffix]
  std::array<double, kDimension> to_array() const;
  static const std::vector<std::string>& names();
  bool operator==(const BinaryIptFeatures&) const = default;
};

struct ContactSegmentFeatures {
  std::size_t char_len = 0;
  std::size_t url_count = 0;
  std::size_t non_alnum_count = 0;
  std::size_t alnum_count = 0;
  std::size_t digit_count = 0;
  std::size_t contact_indicator_count = 0;
  std::size_t separator_punct_count = 0;
  bool has_file_suffix = false;

  static constexpr std::size_t kDimension = 8;
  std::array<double, kDimension> to_array() const;
  static const std::vector<std::string>& names();
  bool operator==(const ContactSegmentFeatures&) const = default;
};

// Instant-messaging marks counted by the binary IPT features.
const std::vector<std::u32string>& im_patterns();
// Contact indicators counted by the contact-segment features.
const std::vector<std::u32string>& contact_indicators();
const std::vector<std::u32string>& file_suffixes();
const std::u32string& bracket_chars();
const std::u32string& separator_punct_chars();

// Non-overlapping occurrences of `patterns` in `text`, scanning left to right
// and taking the longest pattern at each position; case-insensitive.
// Patterns must already be lowercase.
std::size_t count_patterns_longest_first(std::u32string_view text,
                                         const std::vector<std::u32string>& patterns);

BinaryIptFeatures binary_ipt_features(std::string_view text);
ContactSegmentFeatures contact_segment_features(std::string_view segment);

}  // namespace ipthunt
