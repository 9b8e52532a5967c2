#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ipthunt {

// Rendered text of an HTML document: script, style and comment content
// dropped, tags replaced by spaces, common entities decoded, whitespace
// collapsed.
std::string visible_text(std::string_view html);

// `src` attributes of <iframe> elements, in document order, unresolved.
std::vector<std::string> iframe_sources(std::string_view html);

// URL of the first <meta http-equiv="refresh" content="N; url=..."> tag.
std::optional<std::string> meta_refresh_target(std::string_view html);

// Target of the earliest static script redirect: `location.href = "..."`,
// `window.location = "..."`, `location.replace("...")` and their
// document/top/self variants. Only string literals are recognized.
std::optional<std::string> script_redirect_target(std::string_view html);

}  // namespace ipthunt
