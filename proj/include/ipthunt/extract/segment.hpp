#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ipthunt/core/types.hpp"
#include "ipthunt/learn/tree_ensemble.hpp"

namespace ipthunt {

enum class SegmentKind { url, candidate };

struct IptSegment {
  std::string text;
  Span span;  // scalar-value offsets into the segmented text
  SegmentKind kind = SegmentKind::candidate;
  bool operator==(const IptSegment&) const = default;
};

// Brackets, parentheses, symbol/emoji characters and sentence punctuation.
bool is_segment_separator(char32_t c);

// URLs first become url segments; the remaining text is split on separators,
// fragments are trimmed of whitespace and empty ones dropped. Segments come
// back in text order.
std::vector<IptSegment> segment_ipt(std::string_view text);

// True when the contact-segment model scores `segment` positive.
// Throws DimensionMismatch when the model is not over the contact-segment
// feature vector.
bool is_contact_segment(std::string_view segment, const TreeEnsembleModel& segment_model);

// URL hosts followed by candidate segments the model classifies as contact
// segments; first occurrence wins.
std::vector<std::string> extract_keywords(const IptRecord& ipt, const TreeEnsembleModel& segment_model);
std::vector<std::string> extract_keywords(std::string_view text, const TreeEnsembleModel& segment_model);

}  // namespace ipthunt
