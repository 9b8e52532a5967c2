#include "ipthunt/core/url.hpp"

#include <cctype>

#include "ipthunt/core/errors.hpp"
#include "ipthunt/core/text.hpp"

namespace ipthunt {

namespace {

bool valid_host_char(unsigned char c) {
  if (c >= 0x80) return true;
  return std::isalnum(c) || c == '-' || c == '.' || c == '_';
}

}  // namespace

std::optional<Url> try_parse_url(std::string_view text) {
  Url u;
  const auto colon = text.find("://");
  if (colon == std::string_view::npos) return std::nullopt;
  u.scheme = ascii_lower(text.substr(0, colon));
  if (u.scheme != "http" && u.scheme != "https") return std::nullopt;
  std::string_view rest = text.substr(colon + 3);
  for (char c : rest)
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') return std::nullopt;

  const auto auth_end = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, auth_end);
  rest = auth_end == std::string_view::npos ? std::string_view{} : rest.substr(auth_end);

  if (const auto at = authority.rfind('@'); at != std::string_view::npos) {
    u.userinfo = std::string(authority.substr(0, at));
    authority = authority.substr(at + 1);
  }
  std::string_view host = authority;
  if (!authority.empty() && authority.front() == '[') {
    const auto close = authority.find(']');
    if (close == std::string_view::npos) return std::nullopt;
    host = authority.substr(0, close + 1);
    std::string_view after = authority.substr(close + 1);
    if (!after.empty()) {
      if (after.front() != ':') return std::nullopt;
      authority = after;
    } else {
      authority = {};
    }
  } else if (const auto pc = authority.rfind(':'); pc != std::string_view::npos) {
    host = authority.substr(0, pc);
    authority = authority.substr(pc);
  } else {
    authority = {};
  }
  if (!authority.empty()) {
    const auto digits = authority.substr(1);
    if (digits.empty() || digits.size() > 5) return std::nullopt;
    int port = 0;
    for (char c : digits) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
      port = port * 10 + (c - '0');
    }
    if (port > 65535) return std::nullopt;
    u.port = port;
  }
  if (host.empty()) return std::nullopt;
  if (host.front() != '[') {
    for (char c : host)
      if (!valid_host_char(static_cast<unsigned char>(c))) return std::nullopt;
    if (host.front() == '.' || host.find("..") != std::string_view::npos) return std::nullopt;
  }
  u.host = ascii_lower(host);

  if (const auto hash = rest.find('#'); hash != std::string_view::npos) {
    u.fragment = std::string(rest.substr(hash + 1));
    rest = rest.substr(0, hash);
  }
  if (const auto q = rest.find('?'); q != std::string_view::npos) {
    u.query = std::string(rest.substr(q + 1));
    rest = rest.substr(0, q);
  }
  u.path = std::string(rest);
  return u;
}

Url parse_url(std::string_view text) {
  auto u = try_parse_url(text);
  if (!u) throw MalformedUrl(std::string(text));
  return *u;
}

std::vector<std::string> Url::path_segments() const {
  std::vector<std::string> out;
  if (path.empty()) return out;
  std::size_t start = path.front() == '/' ? 1 : 0;
  while (true) {
    const auto slash = path.find('/', start);
    if (slash == std::string::npos) {
      out.push_back(path.substr(start));
      break;
    }
    out.push_back(path.substr(start, slash - start));
    start = slash + 1;
  }
  return out;
}

std::vector<QueryParam> Url::query_params() const {
  std::vector<QueryParam> out;
  if (!query || query->empty()) return out;
  std::string_view q = *query;
  while (true) {
    const auto amp = q.find('&');
    std::string_view part = q.substr(0, amp);
    if (!part.empty()) {
      QueryParam p;
      if (const auto eq = part.find('='); eq != std::string_view::npos) {
        p.key = std::string(part.substr(0, eq));
        p.value = std::string(part.substr(eq + 1));
      } else {
        p.key = std::string(part);
        p.has_equals = false;
      }
      out.push_back(std::move(p));
    }
    if (amp == std::string_view::npos) break;
    q = q.substr(amp + 1);
  }
  return out;
}

std::string join_query(const std::vector<QueryParam>& params) {
  std::string out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out.push_back('&');
    out += params[i].key;
    if (params[i].has_equals) {
      out.push_back('=');
      out += params[i].value;
    }
  }
  return out;
}

std::string join_path(const std::vector<std::string>& segments) {
  std::string out;
  for (const auto& s : segments) {
    out.push_back('/');
    out += s;
  }
  return out;
}

std::string Url::without_fragment() const {
  std::string out = scheme + "://";
  if (!userinfo.empty()) out += userinfo + "@";
  out += host;
  if (port) out += ":" + std::to_string(*port);
  out += path;
  if (query) out += "?" + *query;
  return out;
}

std::string Url::to_string() const {
  std::string out = without_fragment();
  if (fragment) out += "#" + *fragment;
  return out;
}

std::string percent_decode(std::string_view s, bool plus_as_space) {
  auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '%' && i + 2 < s.size() && hex(s[i + 1]) >= 0 && hex(s[i + 2]) >= 0) {
      out.push_back(static_cast<char>(hex(s[i + 1]) * 16 + hex(s[i + 2])));
      i += 2;
    } else if (c == '+' && plus_as_space) {
      out.push_back(' ');
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
      out.push_back(ch);
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::string resolve_url(std::string_view base, std::string_view ref) {
  // trim surrounding whitespace
  while (!ref.empty() && std::isspace(static_cast<unsigned char>(ref.front()))) ref.remove_prefix(1);
  while (!ref.empty() && std::isspace(static_cast<unsigned char>(ref.back()))) ref.remove_suffix(1);
  if (try_parse_url(ref)) return std::string(ref);
  const Url b = parse_url(base);
  std::string origin = b.scheme + "://";
  if (!b.userinfo.empty()) origin += b.userinfo + "@";
  origin += b.host;
  if (b.port) origin += ":" + std::to_string(*b.port);
  if (ref.starts_with("//")) return b.scheme + ":" + std::string(ref);
  if (ref.empty()) return b.without_fragment();
  if (ref.front() == '/') return origin + std::string(ref);
  if (ref.front() == '?') return origin + b.path + std::string(ref);
  if (ref.front() == '#') return b.without_fragment() + std::string(ref);
  std::string dir = b.path;
  const auto slash = dir.rfind('/');
  dir = slash == std::string::npos ? "/" : dir.substr(0, slash + 1);
  std::string rel(ref);
  while (rel.starts_with("./")) rel.erase(0, 2);
  while (rel.starts_with("../")) {
    rel.erase(0, 3);
    if (dir.size() > 1) {
      const auto prev = dir.rfind('/', dir.size() - 2);
      dir = dir.substr(0, prev + 1);
    }
  }
  return origin + dir + rel;
}

}  // namespace ipthunt
