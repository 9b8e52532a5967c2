#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace ipthunt {

// Text is stored as UTF-8 everywhere; scanning code works on UTF-32 so that
// offsets and lengths count Unicode scalar values. Invalid UTF-8 sequences
// decode to U+FFFD.
std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view text);
std::string to_utf8(char32_t cp);

// Number of scalar values in a UTF-8 string.
std::size_t scalar_length(std::string_view utf8);

// Unicode compatibility normalization (NFKC) followed by collapsing every
// whitespace run to one U+0020 and trimming both ends. Idempotent.
std::string normalize_ipt_text(std::string_view raw);

// NFKC of a UTF-32 string.
std::u32string nfkc(std::u32string_view text);

// Simple per-code-point lowercase (no length-changing special casing).
std::u32string simple_lower(std::u32string_view text);
char32_t simple_lower(char32_t cp);

bool is_whitespace(char32_t cp);
bool is_ascii_alnum(char32_t cp);
bool is_ascii_alpha(char32_t cp);
bool is_ascii_digit(char32_t cp);
// General category Nd.
bool is_decimal_digit(char32_t cp);
// Letters (L*) or decimal digits (Nd).
bool is_alnum(char32_t cp);
// General category S* (Sm, Sc, Sk, So) or Emoji_Presentation.
bool is_symbol_or_emoji(char32_t cp);

// Collapse whitespace runs and trim, without Unicode normalization.
std::string collapse_whitespace(std::string_view utf8);

std::string ascii_lower(std::string_view s);

}  // namespace ipthunt
