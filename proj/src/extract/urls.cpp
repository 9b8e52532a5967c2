#include "ipthunt/extract/urls.hpp"

#include "ipthunt/core/contact_grammar.hpp"
#include "ipthunt/core/text.hpp"

namespace ipthunt {

namespace {

bool label_char(char32_t c) { return is_ascii_alnum(c) || c == U'-'; }
bool host_char(char32_t c) { return label_char(c) || c == U'.'; }

char32_t lower(char32_t c) { return (c >= U'A' && c <= U'Z') ? c - U'A' + U'a' : c; }

bool starts_with_ci(std::u32string_view text, std::size_t at, std::u32string_view prefix) {
  if (at + prefix.size() > text.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k)
    if (lower(text[at + k]) != prefix[k]) return false;
  return true;
}

bool path_char(char32_t c) {
  if (c < 0x21 || c > 0x7E) return false;
  switch (c) {
    case U'<': case U'>': case U'"': case U'\'': case U'`': case U'{': case U'}':
    case U'|': case U'\\': case U'^':
      return false;
    default:
      return true;
  }
}

bool trailing_punct(char32_t c) {
  switch (c) {
    case U'.': case U',': case U';': case U':': case U'!': case U'?': case U')': case U']':
      return true;
    default:
      return false;
  }
}

struct Label {
  std::size_t begin;
  std::size_t end;
};

}  // namespace

std::vector<UrlMatch> extract_urls(std::u32string_view text) {
  std::vector<UrlMatch> out;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    if (i > 0 && host_char(text[i - 1])) {
      ++i;
      continue;
    }
    std::size_t host_start = i;
    if (starts_with_ci(text, i, U"https://")) host_start = i + 8;
    else if (starts_with_ci(text, i, U"http://")) host_start = i + 7;

    std::vector<Label> labels;
    std::size_t p = host_start;
    while (p < n && label_char(text[p])) {
      const std::size_t b = p;
      while (p < n && label_char(text[p])) ++p;
      labels.push_back({b, p});
      if (p + 1 < n && text[p] == U'.' && label_char(text[p + 1])) {
        ++p;
        continue;
      }
      break;
    }

    std::size_t tld_index = labels.size();
    for (std::size_t m = labels.size(); m-- > 1;) {
      std::u32string label(text.substr(labels[m].begin, labels[m].end - labels[m].begin));
      for (auto& c : label) c = lower(c);
      if (is_known_tld(to_utf8(label))) {
        tld_index = m;
        break;
      }
    }
    const bool bad_edges = !labels.empty() && (text[labels.front().begin] == U'-');
    if (tld_index == labels.size() || bad_edges) {
      ++i;
      continue;
    }

    std::size_t end = labels[tld_index].end;
    std::u32string host_text(text.substr(host_start, end - host_start));
    if (tld_index + 1 == labels.size()) {
      if (end + 1 < n && text[end] == U':' && is_ascii_digit(text[end + 1])) {
        std::size_t q = end + 1;
        while (q < n && q - end <= 5 && is_ascii_digit(text[q])) ++q;
        end = q;
      }
      if (end < n && (text[end] == U'/' || text[end] == U'?' || text[end] == U'#')) {
        std::size_t q = end;
        while (q < n && path_char(text[q])) ++q;
        while (q > end + 1 && trailing_punct(text[q - 1])) --q;
        end = q;
      }
    }

    for (auto& c : host_text) c = lower(c);
    out.push_back({to_utf8(text.substr(i, end - i)), to_utf8(host_text), Span{i, end}});
    i = end;
  }
  return out;
}

std::vector<UrlMatch> extract_urls(std::string_view utf8) { return extract_urls(to_u32(utf8)); }

}  // namespace ipthunt
