#include "ipthunt/extract/contacts.hpp"

#include <algorithm>

#include "ipthunt/core/contact_grammar.hpp"
#include "ipthunt/core/errors.hpp"
#include "ipthunt/core/text.hpp"
#include "ipthunt/extract/urls.hpp"

namespace ipthunt {

namespace {

constexpr std::size_t kAdjacencyWindow = 3;

bool is_handle_char(char32_t c) { return is_ascii_alnum(c) || c == U'_'; }
bool is_wechat_char(char32_t c) { return is_ascii_alnum(c) || c == U'_' || c == U'-'; }

// Lowercased copy with every URL replaced by spaces.
std::u32string masked_lower(std::u32string_view text, const std::vector<UrlMatch>& urls) {
  auto out = simple_lower(text);
  for (const auto& m : urls)
    for (std::size_t i = m.span.start; i < m.span.end; ++i) out[i] = U' ';
  return out;
}

std::size_t run_end(std::u32string_view s, std::size_t i, bool (*pred)(char32_t)) {
  while (i < s.size() && pred(s[i])) ++i;
  return i;
}

struct Token {
  std::size_t start;
  std::size_t end;
};

// The ASCII token starting within the adjacency window after `from`.
std::optional<Token> token_after(std::u32string_view s, std::size_t from, bool (*pred)(char32_t)) {
  for (std::size_t k = 0; k <= kAdjacencyWindow && from + k < s.size(); ++k) {
    const char32_t c = s[from + k];
    if (is_ascii_alnum(c)) {
      const auto start = from + k;
      return Token{start, run_end(s, start, pred)};
    }
    if (c == U'\n' || c == U'\r') return std::nullopt;
  }
  return std::nullopt;
}

bool boundary_before(std::u32string_view s, std::size_t i) {
  return i == 0 || !(is_handle_char(s[i - 1]) || s[i - 1] == U'+');
}

Contact make_contact(ContactKind kind, std::string value, std::size_t start, std::size_t end) {
  Contact c;
  c.kind = kind;
  c.value = std::move(value);
  c.raw_span = {start, end};
  return c;
}

struct DigitRun {
  std::size_t start;  // includes a leading '+'
  std::size_t end;
  bool plus;
};

std::vector<DigitRun> digit_runs(std::u32string_view s) {
  std::vector<DigitRun> out;
  for (std::size_t i = 0; i < s.size();) {
    if (!is_ascii_digit(s[i])) {
      ++i;
      continue;
    }
    const auto end = run_end(s, i, is_ascii_digit);
    const bool plus = i > 0 && s[i - 1] == U'+';
    const auto start = plus ? i - 1 : i;
    const bool clean_left = boundary_before(s, start) || plus;
    const bool clean_right = end == s.size() || !is_handle_char(s[end]);
    if (clean_left && clean_right && (!plus || boundary_before(s, start))) out.push_back({start, end, plus});
    i = end;
  }
  return out;
}

std::vector<Contact> qq_contacts(std::u32string_view s, const std::vector<IndicatorHit>& hits) {
  std::vector<Contact> out;
  for (const auto& h : hits) {
    if (h.kind != ContactKind::QQ) continue;
    const auto tok = token_after(s, h.end, is_ascii_digit);
    if (!tok) continue;
    if (tok->end < s.size() && is_handle_char(s[tok->end])) continue;
    auto value = to_utf8(s.substr(tok->start, tok->end - tok->start));
    if (valid_contact_value(ContactKind::QQ, value))
      out.push_back(make_contact(ContactKind::QQ, std::move(value), tok->start, tok->end));
  }
  return out;
}

std::vector<Contact> phone_contacts(std::u32string_view s, const std::vector<IndicatorHit>& hits) {
  std::vector<std::pair<std::size_t, std::size_t>> qq_spans;
  for (const auto& c : qq_contacts(s, hits)) qq_spans.emplace_back(c.raw_span.start, c.raw_span.end);
  std::vector<Contact> out;
  for (const auto& r : digit_runs(s)) {
    const auto digits_start = r.plus ? r.start + 1 : r.start;
    if (std::find(qq_spans.begin(), qq_spans.end(), std::make_pair(digits_start, r.end)) != qq_spans.end())
      continue;
    auto value = to_utf8(s.substr(r.start, r.end - r.start));
    if (valid_contact_value(ContactKind::Phone, value))
      out.push_back(make_contact(ContactKind::Phone, std::move(value), r.start, r.end));
  }
  return out;
}

std::vector<Contact> telegram_contacts(std::u32string_view s, const std::vector<IndicatorHit>& hits) {
  std::vector<Contact> out;
  auto take = [&](std::size_t start, std::size_t end) {
    if (end < s.size() && (s[end] == U'.' || s[end] == U'-') && end + 1 < s.size() && is_ascii_alnum(s[end + 1]))
      return;  // part of a longer dotted or hyphenated name
    auto value = ascii_lower(to_utf8(s.substr(start, end - start)));
    if (valid_contact_value(ContactKind::Telegram, value))
      out.push_back(make_contact(ContactKind::Telegram, std::move(value), start, end));
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != U'@' || i + 1 >= s.size() || !is_ascii_alnum(s[i + 1])) continue;
    if (i > 0 && (is_handle_char(s[i - 1]) || s[i - 1] == U'.')) continue;  // e-mail address
    take(i + 1, run_end(s, i + 1, is_handle_char));
  }
  for (const auto& h : hits) {
    if (h.kind != ContactKind::Telegram) continue;
    if (const auto tok = token_after(s, h.end, is_handle_char)) take(tok->start, tok->end);
  }
  return out;
}

std::vector<Contact> wechat_contacts(std::u32string_view s, const std::vector<IndicatorHit>& hits) {
  std::vector<Contact> out;
  for (const auto& h : hits) {
    if (h.kind != ContactKind::WeChat) continue;
    const auto tok = token_after(s, h.end, is_wechat_char);
    if (!tok) continue;
    auto value = to_utf8(s.substr(tok->start, tok->end - tok->start));
    if (valid_contact_value(ContactKind::WeChat, value))
      out.push_back(make_contact(ContactKind::WeChat, std::move(value), tok->start, tok->end));
  }
  return out;
}

std::vector<Contact> website_contacts(std::u32string_view s) {
  std::vector<Contact> out;
  for (const auto& m : extract_urls(s))
    if (valid_contact_value(ContactKind::Website, m.host))
      out.push_back(make_contact(ContactKind::Website, m.host, m.span.start, m.span.end));
  return out;
}

void sort_unique(std::vector<Contact>& contacts) {
  std::stable_sort(contacts.begin(), contacts.end(),
                   [](const Contact& a, const Contact& b) { return a.raw_span.start < b.raw_span.start; });
  std::vector<Contact> unique;
  for (auto& c : contacts) {
    const bool seen = std::any_of(unique.begin(), unique.end(),
                                  [&](const Contact& u) { return u.kind == c.kind && u.value == c.value; });
    if (!seen) unique.push_back(std::move(c));
  }
  contacts = std::move(unique);
}

}  // namespace

const std::vector<std::pair<std::u32string, ContactKind>>& contact_kind_indicators() {
  static const std::vector<std::pair<std::u32string, ContactKind>> list = [] {
    std::vector<std::pair<std::u32string, ContactKind>> v{
        {U"telegram", ContactKind::Telegram}, {U"tg", ContactKind::Telegram},
        {U"纸飞机", ContactKind::Telegram},   {U"飞机", ContactKind::Telegram},
        {U"飛機", ContactKind::Telegram},     {U"电报", ContactKind::Telegram},
        {U"微信", ContactKind::WeChat},       {U"威信", ContactKind::WeChat},
        {U"薇信", ContactKind::WeChat},       {U"v信", ContactKind::WeChat},
        {U"加v", ContactKind::WeChat},        {U"wechat", ContactKind::WeChat},
        {U"weixin", ContactKind::WeChat},     {U"vx", ContactKind::WeChat},
        {U"wx", ContactKind::WeChat},         {U"微", ContactKind::WeChat},
        {U"薇", ContactKind::WeChat},         {U"qq", ContactKind::QQ},
        {U"扣扣", ContactKind::QQ},           {U"扣微", ContactKind::QQ},
        {U"企鹅", ContactKind::QQ},           {U"联系电话", ContactKind::Phone},
        {U"电话", ContactKind::Phone},        {U"手机", ContactKind::Phone},
        {U"热线", ContactKind::Phone},        {U"致电", ContactKind::Phone},
        {U"phone", ContactKind::Phone},       {U"tel", ContactKind::Phone},
    };
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
    return v;
  }();
  return list;
}

std::vector<IndicatorHit> find_indicators(std::u32string_view text) {
  const auto urls = extract_urls(text);
  const auto s = masked_lower(text, urls);
  const auto& list = contact_kind_indicators();
  std::vector<IndicatorHit> out;
  for (std::size_t i = 0; i < s.size();) {
    bool matched = false;
    for (const auto& [pattern, kind] : list) {
      if (s.compare(i, pattern.size(), pattern) != 0) continue;
      if (is_ascii_alpha(pattern.front()) && i > 0 && is_ascii_alpha(s[i - 1])) continue;
      out.push_back({kind, i, i + pattern.size()});
      i += pattern.size();
      matched = true;
      break;
    }
    if (!matched) ++i;
  }
  return out;
}

std::array<double, ContactTypeFeatures::kDimension> ContactTypeFeatures::to_array() const {
  return {static_cast<double>(telegram_indicators), static_cast<double>(wechat_indicators),
          static_cast<double>(qq_indicators),       static_cast<double>(phone_indicators),
          static_cast<double>(at_handles),          static_cast<double>(url_count),
          static_cast<double>(longest_digit_run),   static_cast<double>(plus_digit_runs),
          static_cast<double>(latin_id_tokens)};
}

const std::vector<std::string>& ContactTypeFeatures::names() {
  static const std::vector<std::string> n{"telegram_indicators", "wechat_indicators", "qq_indicators",
                                          "phone_indicators",    "at_handles",        "url_count",
                                          "longest_digit_run",   "plus_digit_runs",   "latin_id_tokens"};
  return n;
}

bool ContactTypeFeatures::has_evidence() const {
  return telegram_indicators + wechat_indicators + qq_indicators + phone_indicators + at_handles + url_count > 0 ||
         longest_digit_run >= 5;
}

ContactTypeFeatures contact_type_features(std::string_view text) {
  const auto chars = to_u32(text);
  const auto urls = extract_urls(std::u32string_view(chars));
  const auto s = masked_lower(chars, urls);
  ContactTypeFeatures f;
  f.url_count = urls.size();
  for (const auto& h : find_indicators(chars)) {
    switch (h.kind) {
      case ContactKind::Telegram: ++f.telegram_indicators; break;
      case ContactKind::WeChat: ++f.wechat_indicators; break;
      case ContactKind::QQ: ++f.qq_indicators; break;
      case ContactKind::Phone: ++f.phone_indicators; break;
      default: break;
    }
  }
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (s[i] == U'@' && is_ascii_alpha(s[i + 1]) && (i == 0 || !is_handle_char(s[i - 1]))) ++f.at_handles;
  for (std::size_t i = 0; i < s.size();) {
    if (is_ascii_digit(s[i])) {
      const auto end = run_end(s, i, is_ascii_digit);
      f.longest_digit_run = std::max(f.longest_digit_run, end - i);
      if (i > 0 && s[i - 1] == U'+') ++f.plus_digit_runs;
      i = end;
    } else if (is_ascii_alpha(s[i])) {
      const auto end = run_end(s, i, is_wechat_char);
      if (end - i >= 5 && (i == 0 || s[i - 1] != U'@')) ++f.latin_id_tokens;
      i = end;
    } else {
      ++i;
    }
  }
  return f;
}

ContactKind classify_contact_type(std::string_view text, const TreeEnsembleModel& type_model) {
  if (type_model.dimension != ContactTypeFeatures::kDimension)
    throw DimensionMismatch("contact-type model expects " + std::to_string(type_model.dimension) +
                            " features, got " + std::to_string(ContactTypeFeatures::kDimension));
  const auto f = contact_type_features(text);
  if (!f.has_evidence()) return ContactKind::Other;
  const auto x = f.to_array();
  return contact_kind_from_string(type_model.classes.at(type_model.predict_class(std::span<const double>(x))));
}

std::vector<Contact> extract_contact_entities(std::string_view text, ContactKind kind) {
  const auto chars = to_u32(text);
  const std::u32string_view s(chars);
  const auto hits = find_indicators(s);
  std::vector<Contact> out;
  switch (kind) {
    case ContactKind::Website: out = website_contacts(s); break;
    case ContactKind::Telegram: out = telegram_contacts(s, hits); break;
    case ContactKind::WeChat: out = wechat_contacts(s, hits); break;
    case ContactKind::QQ: out = qq_contacts(s, hits); break;
    case ContactKind::Phone: out = phone_contacts(s, hits); break;
    case ContactKind::Other: break;
  }
  sort_unique(out);
  return out;
}

std::vector<Contact> extract_contacts(std::string_view text, const TreeEnsembleModel& type_model,
                                      const std::string& source_ipt, const ConfusableMap& confusables) {
  const auto trace = normalize_evasions(text, confusables);
  const auto kind = classify_contact_type(trace.normalized_text, type_model);
  auto contacts = extract_contact_entities(trace.normalized_text, kind);
  if (kind != ContactKind::Website) {
    auto sites = extract_contact_entities(trace.normalized_text, ContactKind::Website);
    contacts.insert(contacts.end(), sites.begin(), sites.end());
  }
  for (auto& c : contacts) {
    c.raw_span = {trace.origin.at(c.raw_span.start), trace.origin.at(c.raw_span.end - 1) + 1};
    c.source_ipt = source_ipt;
  }
  sort_unique(contacts);
  return contacts;
}

std::vector<Contact> extract_contacts(const IptRecord& ipt, const TreeEnsembleModel& type_model,
                                      const ConfusableMap& confusables) {
  return extract_contacts(ipt.text, type_model, ipt.id, confusables);
}

}  // namespace ipthunt
