#pragma once

#include <string_view>
#include <unordered_set>
#include <string>

#include "ipthunt/core/types.hpp"

namespace ipthunt {

// Embedded top-level-domain list accepted by the URL grammar.
const std::unordered_set<std::string>& known_tlds();
bool is_known_tld(std::string_view label_lowercase);

// Kind-specific validation grammars for contact values:
//   QQ        5-11 digits, first digit 1-9
//   Phone     optional '+', then 7-15 digits
//   Telegram  5-32 chars, a letter then letters/digits/underscore
//   WeChat    6-20 chars, a letter then letters/digits/underscore/hyphen
//   Website   lowercase host of >= 2 labels ending in a known TLD
bool valid_contact_value(ContactKind kind, std::string_view value);

}  // namespace ipthunt
