#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ipthunt/core/types.hpp"

namespace ipthunt {

// Plain text extracted from a page, keyed by where it was rendered.
using PageText = std::map<ReflectionLocation, std::string>;

// Shorter parameter values match page text too easily to count as evidence.
inline constexpr std::size_t kMinReflectedLength = 3;

inline constexpr std::string_view kSlot = "{R}";

// Reports every URL parameter value (query values and the terminal path
// segment) of at least kMinReflectedLength scalar values that occurs verbatim,
// after one round of percent- and plus-decoding, in any location of `page`.
// Query parameters are listed in query-string order, then the path segment;
// each (parameter, location) match is one entry. Throws MalformedUrl.
std::optional<ReflectionFinding> detect_reflection(const SearchResultEntry& entry,
                                                   const PageText& page);

// Template for the first reflected query parameter (a reflected path segment
// only when no query parameter reflects). Other components are kept verbatim,
// the fragment is dropped.
UrlReflectionScheme canonicalize_urs(const ReflectionFinding& finding);

// The decoded value carried in the slot that canonicalize_urs picks.
std::string reflected_value(const ReflectionFinding& finding);

// Substitutes the percent-encoded value into the template slot.
std::string instantiate(std::string_view template_url, std::string_view value);

// Decoded slot value when `url` instantiates the template: same scheme, host,
// port, path shape and the same other query parameters (order-insensitive).
// Throws MalformedUrl for an unparsable `url`.
std::optional<std::string> match_urs(const UrlReflectionScheme& urs, std::string_view url);

// Template text before the slot, used for `site:` queries.
std::string urs_prefix(const UrlReflectionScheme& urs);

UrlReflectionScheme urs_from_template(std::string_view template_url);

}  // namespace ipthunt
