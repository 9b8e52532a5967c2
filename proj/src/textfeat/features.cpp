#include "ipthunt/textfeat/features.hpp"

#include <algorithm>

#include "ipthunt/core/text.hpp"
#include "ipthunt/extract/urls.hpp"

namespace ipthunt {

namespace {

bool has_any_suffix(std::u32string_view lowered) {
  for (const auto& s : file_suffixes())
    if (lowered.find(s) != std::u32string_view::npos) return true;
  return false;
}

std::vector<std::u32string> sorted_longest_first(std::vector<std::u32string> v) {
  std::stable_sort(v.begin(), v.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return v;
}

}  // namespace

const std::vector<std::u32string>& im_patterns() {
  static const std::vector<std::u32string> p = {
      U"微信", U"q微", U"扣微", U"微", U"薇", U"扣扣", U"qq", U"www", U"com",
      U"fun",  U"cc",  U"tg",   U"telegram", U"飞机", U"@", U"网", U"v信"};
  return p;
}

const std::vector<std::u32string>& contact_indicators() {
  static const std::vector<std::u32string> p = {
      U"微信", U"q微", U"扣微", U"微",       U"薇",  U"扣扣", U"qq", U"com", U"fun",
      U"cc",   U"hash", U"tg", U"telegram", U"飞机", U"@",   U"网", U"复制"};
  return p;
}

const std::vector<std::u32string>& file_suffixes() {
  static const std::vector<std::u32string> s = {U".html", U".shtml", U".htm",  U".php",
                                                U".pdf",  U".jpg",   U".jpeg", U".png",
                                                U".xlsx", U".docx",  U".pptx", U".xml"};
  return s;
}

const std::u32string& bracket_chars() {
  static const std::u32string b = U"{}[]【】『』";
  return b;
}

const std::u32string& separator_punct_chars() {
  static const std::u32string s = U".:：·ͺ-";
  return s;
}

std::size_t count_patterns_longest_first(std::u32string_view text,
                                         const std::vector<std::u32string>& patterns) {
  const std::u32string lowered = simple_lower(text);
  // Longest first, so the first hit at a position is the longest one.
  const auto ordered = sorted_longest_first(patterns);
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < lowered.size()) {
    std::size_t matched = 0;
    for (const auto& p : ordered) {
      if (!p.empty() && lowered.compare(i, p.size(), p) == 0) {
        matched = p.size();
        break;
      }
    }
    if (matched) {
      ++count;
      i += matched;
    } else {
      ++i;
    }
  }
  return count;
}

std::array<double, BinaryIptFeatures::kDimension> BinaryIptFeatures::to_array() const {
  return {static_cast<double>(char_len),      static_cast<double>(bracket_count),
          static_cast<double>(url_count),     static_cast<double>(digit_count),
          static_cast<double>(symbol_count),  static_cast<double>(im_pattern_count),
          has_file_suffix ? 1.0 : 0.0};
}

const std::vector<std::string>& BinaryIptFeatures::names() {
  static const std::vector<std::string> n = {"char_len",     "bracket_count",    "url_count",
                                             "digit_count",  "symbol_count",     "im_pattern_count",
                                             "has_file_suffix"};
  return n;
}

std::array<double, ContactSegmentFeatures::kDimension> ContactSegmentFeatures::to_array() const {
  return {static_cast<double>(char_len),        static_cast<double>(url_count),
          static_cast<double>(non_alnum_count), static_cast<double>(alnum_count),
          static_cast<double>(digit_count),     static_cast<double>(contact_indicator_count),
          static_cast<double>(separator_punct_count), has_file_suffix ? 1.0 : 0.0};
}

const std::vector<std::string>& ContactSegmentFeatures::names() {
  static const std::vector<std::string> n = {
      "char_len",    "url_count",               "non_alnum_count",       "alnum_count",
      "digit_count", "contact_indicator_count", "separator_punct_count", "has_file_suffix"};
  return n;
}

BinaryIptFeatures binary_ipt_features(std::string_view text) {
  const std::u32string t = to_u32(text);
  BinaryIptFeatures f;
  f.char_len = t.size();
  for (char32_t cp : t) {
    if (bracket_chars().find(cp) != std::u32string::npos) ++f.bracket_count;
    if (is_decimal_digit(cp)) ++f.digit_count;
    if (is_symbol_or_emoji(cp)) ++f.symbol_count;
  }
  f.url_count = extract_urls(std::u32string_view(t)).size();
  f.im_pattern_count = count_patterns_longest_first(t, im_patterns());
  f.has_file_suffix = has_any_suffix(simple_lower(t));
  return f;
}

ContactSegmentFeatures contact_segment_features(std::string_view segment) {
  const std::u32string t = to_u32(segment);
  ContactSegmentFeatures f;
  f.char_len = t.size();
  for (char32_t cp : t) {
    if (is_alnum(cp)) ++f.alnum_count;
    else ++f.non_alnum_count;
    if (is_decimal_digit(cp)) ++f.digit_count;
    if (separator_punct_chars().find(cp) != std::u32string::npos) ++f.separator_punct_count;
  }
  f.url_count = extract_urls(std::u32string_view(t)).size();
  f.contact_indicator_count = count_patterns_longest_first(t, contact_indicators());
  f.has_file_suffix = has_any_suffix(simple_lower(t));
  return f;
}

}  // namespace ipthunt
