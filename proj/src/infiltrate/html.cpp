#include "ipthunt/infiltrate/html.hpp"

#include <regex>

#include "ipthunt/core/text.hpp"

namespace ipthunt {

namespace {

std::size_t find_ci(std::string_view hay, std::string_view needle, std::size_t from) {
  if (needle.size() > hay.size()) return std::string_view::npos;
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
    std::size_t k = 0;
    while (k < needle.size() && static_cast<char>(std::tolower(static_cast<unsigned char>(hay[i + k]))) == needle[k]) ++k;
    if (k == needle.size()) return i;
  }
  return std::string_view::npos;
}

void append_entity(std::string& out, std::string_view name) {
  if (name == "amp") out += '&';
  else if (name == "lt") out += '<';
  else if (name == "gt") out += '>';
  else if (name == "quot") out += '"';
  else if (name == "apos" || name == "#39") out += '\'';
  else if (name == "nbsp") out += ' ';
  else if (name.size() > 1 && name[0] == '#') {
    char32_t cp = 0;
    try {
      cp = (name[1] == 'x' || name[1] == 'X') ? std::stoul(std::string(name.substr(2)), nullptr, 16)
                                              : std::stoul(std::string(name.substr(1)));
    } catch (...) {
      cp = 0;
    }
    if (cp > 0 && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF)) out += to_utf8(cp);
  } else {
    out += '&';
    out += name;
    out += ';';
  }
}

std::string decode_entities(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '&') {
      const auto semi = s.find(';', i + 1);
      if (semi != std::string_view::npos && semi - i <= 10) {
        append_entity(out, s.substr(i + 1, semi - i - 1));
        i = semi;
        continue;
      }
    }
    out += s[i];
  }
  return out;
}

std::string attribute_value(const std::smatch& m, std::size_t first_group) {
  for (std::size_t g = first_group; g < m.size(); ++g)
    if (m[g].matched) return decode_entities(m[g].str());
  return {};
}

}  // namespace

std::string visible_text(std::string_view html) {
  std::string out;
  std::size_t i = 0;
  while (i < html.size()) {
    if (html[i] != '<') {
      const auto next = html.find('<', i);
      out += decode_entities(html.substr(i, next == std::string_view::npos ? std::string_view::npos : next - i));
      if (next == std::string_view::npos) break;
      i = next;
      continue;
    }
    if (html.substr(i, 4) == "<!--") {
      const auto end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
      out += ' ';
      continue;
    }
    const auto close = html.find('>', i);
    if (close == std::string_view::npos) break;
    std::string name;
    for (std::size_t k = i + 1; k < close && std::isalpha(static_cast<unsigned char>(html[k])); ++k)
      name += static_cast<char>(std::tolower(static_cast<unsigned char>(html[k])));
    i = close + 1;
    if (name == "script" || name == "style" || name == "noscript" || name == "template") {
      const auto end = find_ci(html, "</" + name, i);
      i = end == std::string_view::npos ? html.size() : end;
    }
    out += ' ';
  }
  return collapse_whitespace(out);
}

std::vector<std::string> iframe_sources(std::string_view html) {
  static const std::regex re(R"re(<iframe\b[^>]*?\ssrc\s*=\s*(?:"([^"]*)"|'([^']*)'|([^\s>]+)))re", std::regex::icase);
  std::vector<std::string> out;
  const std::string s(html);
  for (std::sregex_iterator it(s.begin(), s.end(), re), end; it != end; ++it) {
    auto v = attribute_value(*it, 1);
    if (!v.empty()) out.push_back(std::move(v));
  }
  return out;
}

std::optional<std::string> meta_refresh_target(std::string_view html) {
  static const std::regex meta(R"re(<meta\b[^>]*>)re", std::regex::icase);
  static const std::regex equiv(R"re(http-equiv\s*=\s*["']?\s*refresh)re", std::regex::icase);
  static const std::regex content(R"re(content\s*=\s*(?:"([^"]*)"|'([^']*)'))re", std::regex::icase);
  static const std::regex target(R"re(^\s*\d*(?:\.\d+)?\s*[;,]\s*url\s*=\s*['"]?([^'"]+?)['"]?\s*$)re", std::regex::icase);
  const std::string s(html);
  for (std::sregex_iterator it(s.begin(), s.end(), meta), end; it != end; ++it) {
    const auto tag = it->str();
    if (!std::regex_search(tag, equiv)) continue;
    std::smatch c;
    if (!std::regex_search(tag, c, content)) continue;
    const auto value = attribute_value(c, 1);
    std::smatch t;
    if (std::regex_match(value, t, target)) return t[1].str();
  }
  return std::nullopt;
}

std::optional<std::string> script_redirect_target(std::string_view html) {
  static const std::regex assign(
      R"re((?:\b(?:window|document|top|self)\.)?\blocation(?:\.href)?\s*=\s*(?:"([^"]*)"|'([^']*)'))re");
  static const std::regex call(R"re(\blocation\.(?:replace|assign)\(\s*(?:"([^"]*)"|'([^']*)')\s*\))re");
  const std::string s(html);
  std::optional<std::pair<std::ptrdiff_t, std::string>> best;
  for (const auto* re : {&assign, &call}) {
    std::smatch m;
    if (std::regex_search(s, m, *re)) {
      auto v = attribute_value(m, 1);
      if (!v.empty() && (!best || m.position(0) < best->first)) best = {{m.position(0), std::move(v)}};
    }
  }
  if (!best) return std::nullopt;
  return best->second;
}

}  // namespace ipthunt
