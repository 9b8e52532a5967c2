#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ipthunt {

struct QueryParam {
  std::string key;    // raw, still percent-encoded
  std::string value;  // raw, still percent-encoded
  bool has_equals = true;
  bool operator==(const QueryParam&) const = default;
};

// Absolute http(s) URL split into raw components. Scheme and host are
// lowercased; everything else is kept verbatim.
struct Url {
  std::string scheme;
  std::string userinfo;
  std::string host;
  std::optional<int> port;
  std::string path;
  std::optional<std::string> query;
  std::optional<std::string> fragment;

  // Path split on '/', without the leading empty element.
  std::vector<std::string> path_segments() const;
  std::vector<QueryParam> query_params() const;
  // Serialization without the fragment.
  std::string without_fragment() const;
  std::string to_string() const;
};

Url parse_url(std::string_view text);  // throws MalformedUrl
std::optional<Url> try_parse_url(std::string_view text);

std::string join_query(const std::vector<QueryParam>& params);
std::string join_path(const std::vector<std::string>& segments);

// Single-pass percent-decoding; invalid escapes are kept literally.
std::string percent_decode(std::string_view s, bool plus_as_space);
// Encodes everything outside the RFC 3986 unreserved set.
std::string percent_encode(std::string_view s);

// Resolves `ref` against absolute `base` (RFC 3986 reference resolution,
// without dot-segment removal beyond the common cases).
std::string resolve_url(std::string_view base, std::string_view ref);

}  // namespace ipthunt
