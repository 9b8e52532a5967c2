#include "ipthunt/extract/segment.hpp"

#include <algorithm>

#include "ipthunt/core/errors.hpp"
#include "ipthunt/core/text.hpp"
#include "ipthunt/extract/urls.hpp"
#include "ipthunt/textfeat/features.hpp"

namespace ipthunt {

namespace {

constexpr std::u32string_view kBracketSeparators = U"{}[]【】『』()（）";
constexpr std::u32string_view kPunctSeparators = U"，。、；!！?？|‖/\\~～…";

void push_fragment(std::vector<IptSegment>& out, std::u32string_view text, std::size_t begin, std::size_t end) {
  while (begin < end && is_whitespace(text[begin])) ++begin;
  while (end > begin && is_whitespace(text[end - 1])) --end;
  if (begin == end) return;
  out.push_back({to_utf8(text.substr(begin, end - begin)), {begin, end}, SegmentKind::candidate});
}

void check_segment_model(const TreeEnsembleModel& segment_model) {
  if (segment_model.dimension != ContactSegmentFeatures::kDimension)
    throw DimensionMismatch("segment model expects " + std::to_string(segment_model.dimension) +
                            " features, contact segments have " +
                            std::to_string(ContactSegmentFeatures::kDimension));
}

}  // namespace

bool is_segment_separator(char32_t c) {
  return kBracketSeparators.find(c) != std::u32string_view::npos ||
         kPunctSeparators.find(c) != std::u32string_view::npos || is_symbol_or_emoji(c);
}

std::vector<IptSegment> segment_ipt(std::string_view text) {
  const auto chars = to_u32(text);
  const std::u32string_view view(chars);
  std::vector<IptSegment> out;
  std::size_t pos = 0;
  auto split_until = [&](std::size_t limit) {
    std::size_t start = pos;
    for (std::size_t i = pos; i < limit; ++i) {
      if (!is_segment_separator(view[i])) continue;
      push_fragment(out, view, start, i);
      start = i + 1;
    }
    push_fragment(out, view, start, limit);
    pos = limit;
  };
  for (const auto& m : extract_urls(view)) {
    split_until(m.span.start);
    out.push_back({m.url, m.span, SegmentKind::url});
    pos = m.span.end;
  }
  split_until(view.size());
  return out;
}

bool is_contact_segment(std::string_view segment, const TreeEnsembleModel& segment_model) {
  check_segment_model(segment_model);
  const auto x = contact_segment_features(segment).to_array();
  return segment_model.classify(std::span<const double>(x));
}

std::vector<std::string> extract_keywords(std::string_view text, const TreeEnsembleModel& segment_model) {
  check_segment_model(segment_model);
  const auto segments = segment_ipt(text);
  std::vector<std::string> out;
  auto add = [&out](std::string k) {
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(std::move(k));
  };
  for (const auto& m : extract_urls(text)) add(m.host);
  for (const auto& s : segments)
    if (s.kind == SegmentKind::candidate && is_contact_segment(s.text, segment_model)) add(s.text);
  return out;
}

std::vector<std::string> extract_keywords(const IptRecord& ipt, const TreeEnsembleModel& segment_model) {
  return extract_keywords(ipt.text, segment_model);
}

}  // namespace ipthunt
