#include "ipthunt/core/contact_grammar.hpp"

#include <cctype>

namespace ipthunt {

const std::unordered_set<std::string>& known_tlds() {
  static const std::unordered_set<std::string> tlds = {
      // generic
      "com", "net", "org", "info", "biz", "xyz", "vip", "fun", "top", "site", "online", "shop",
      "win", "bet", "app", "club", "live", "pro", "link", "ltd", "store", "tech", "space",
      "website", "icu", "cyou", "asia", "mobi", "name", "work", "life", "world", "today", "news",
      "blog", "art", "wang", "ink", "ren", "red", "kim", "xin", "cloud", "host", "press", "fit",
      "buzz", "lol", "sbs", "cfd", "bond", "homes", "monster", "quest", "rest", "click", "best",
      "casino", "poker", "games", "game", "vin", "love", "sex", "porn", "xxx", "dev", "edu",
      "gov", "int", "mil", "tel", "one", "plus", "run", "show", "team", "zone", "email", "media",
      // country codes
      "cc", "cn", "io", "me", "tv", "vn", "kr", "jp", "uk", "de", "ru", "fr", "br", "hk", "tw",
      "sg", "my", "th", "ph", "au", "ca", "us", "co", "la", "ws", "ly", "gg", "pw", "su", "ua",
      "nl", "es", "pl", "ch", "se", "eu", "mx", "ar", "cl", "tk", "ml", "ga", "cf", "gq", "nu",
      "im", "vc", "kz", "mo", "tr", "ir", "id", "in",
  };
  return tlds;
}

bool is_known_tld(std::string_view label_lowercase) {
  return known_tlds().contains(std::string(label_lowercase));
}

namespace {

bool all_digits(std::string_view s) {
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return !s.empty();
}

bool handle_like(std::string_view s, std::size_t min_len, std::size_t max_len, bool allow_hyphen) {
  if (s.size() < min_len || s.size() > max_len) return false;
  if (!std::isalpha(static_cast<unsigned char>(s.front()))) return false;
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (u >= 0x80) return false;
    if (std::isalnum(u) || c == '_' || (allow_hyphen && c == '-')) continue;
    return false;
  }
  return true;
}

bool valid_host(std::string_view host) {
  std::size_t labels = 0;
  std::string_view last;
  std::size_t start = 0;
  while (true) {
    const auto dot = host.find('.', start);
    const auto label = host.substr(start, dot == std::string_view::npos ? host.npos : dot - start);
    if (label.empty()) return false;
    for (char c : label) {
      const auto u = static_cast<unsigned char>(c);
      if (!(std::islower(u) || std::isdigit(u) || c == '-')) return false;
    }
    ++labels;
    last = label;
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return labels >= 2 && is_known_tld(last);
}

}  // namespace

bool valid_contact_value(ContactKind kind, std::string_view value) {
  switch (kind) {
    case ContactKind::QQ:
      return value.size() >= 5 && value.size() <= 11 && all_digits(value) && value.front() != '0';
    case ContactKind::Phone: {
      std::string_view digits = value;
      if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
      return digits.size() >= 7 && digits.size() <= 15 && all_digits(digits);
    }
    case ContactKind::Telegram:
      return handle_like(value, 5, 32, false);
    case ContactKind::WeChat:
      return handle_like(value, 6, 20, true);
    case ContactKind::Website:
      return valid_host(value);
    case ContactKind::Other:
      return !value.empty();
  }
  return false;
}

}  // namespace ipthunt
