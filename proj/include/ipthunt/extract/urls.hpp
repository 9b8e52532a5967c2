#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ipthunt/core/types.hpp"

namespace ipthunt {

struct UrlMatch {
  std::string url;   // matched text, verbatim
  std::string host;  // lowercased host
  Span span;         // scalar-value offsets into the scanned text
};

// URL grammar: optional http(s):// scheme, a host of at least two
// dot-separated ASCII labels whose last label is a known TLD, then an optional
// port and path/query/fragment. Matches are leftmost-longest and
// non-overlapping.
std::vector<UrlMatch> extract_urls(std::u32string_view text);
std::vector<UrlMatch> extract_urls(std::string_view utf8);

}  // namespace ipthunt
