#include "ipthunt/extract/normalize.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "ipthunt/core/contact_grammar.hpp"
#include "ipthunt/core/errors.hpp"
#include "ipthunt/core/text.hpp"

namespace ipthunt {

namespace detail {
extern const std::string_view kBuiltinConfusables;
}  // namespace detail

namespace {

constexpr std::u32string_view kPeriodMarks = U"。｡点";
constexpr std::u32string_view kZeroWidth =
    U"\u00AD\u034F\u180E\u200B\u200C\u200D\u2060\u2061\u2062\u2063\u2064\uFE0E\uFE0F\uFEFF";
constexpr int kMaxRounds = 8;

struct Work {
  std::u32string text;
  std::vector<std::size_t> origin;
};

bool is_run_char(char32_t c) { return is_ascii_alnum(c) || c == U'_' || c == U'-' || c == U'.'; }

bool is_token_char(char32_t c) { return is_alnum(c) || c == U'_' || c == U'-'; }

bool only_ascii_digits(std::u32string_view s) {
  if (s.empty()) return false;
  for (char32_t c : s)
    if (!is_ascii_digit(c)) return false;
  return true;
}

bool valid_as_same(std::string_view a, std::string_view b, std::string_view merged) {
  for (auto kind : {ContactKind::QQ, ContactKind::Phone, ContactKind::Telegram, ContactKind::WeChat}) {
    if (valid_contact_value(kind, merged) && !(valid_contact_value(kind, a) && valid_contact_value(kind, b)))
      return true;
  }
  const auto lm = ascii_lower(merged);
  return valid_contact_value(ContactKind::Website, lm) &&
         !(valid_contact_value(ContactKind::Website, ascii_lower(a)) &&
           valid_contact_value(ContactKind::Website, ascii_lower(b)));
}

// Rewrites `w` in one left-to-right sweep. `decide` sees the already
// rewritten prefix, the unrewritten input and the current index, and returns
// a replacement for that one code point or nullopt to keep it.
template <typename Decide>
bool sweep(Work& w, EvasionRule rule, std::vector<NormalizationEdit>& edits, Decide decide) {
  Work out;
  out.text.reserve(w.text.size());
  bool changed = false;
  for (std::size_t i = 0; i < w.text.size(); ++i) {
    const std::optional<std::u32string> rep = decide(std::u32string_view(out.text), std::u32string_view(w.text), i);
    if (!rep) {
      out.text.push_back(w.text[i]);
      out.origin.push_back(w.origin[i]);
      continue;
    }
    changed = true;
    edits.push_back({out.text.size(), to_utf8(w.text[i]), to_utf8(*rep), rule});
    for (char32_t c : *rep) {
      out.text.push_back(c);
      out.origin.push_back(w.origin[i]);
    }
  }
  w = std::move(out);
  return changed;
}

bool fold_pass(Work& w, std::vector<NormalizationEdit>& edits) {
  return sweep(w, EvasionRule::compatibility_fold, edits,
               [](std::u32string_view, std::u32string_view in, std::size_t i) -> std::optional<std::u32string> {
                 const char32_t c = in[i];
                 if (c < 0x80 || (c >= 0x4E00 && c <= 0x9FFF)) return std::nullopt;
                 const auto folded = nfkc(std::u32string_view(&in[i], 1));
                 if (folded.size() == 1 && folded[0] > 0x20 && folded[0] < 0x7F) return folded;
                 return std::nullopt;
               });
}

bool confusable_pass(Work& w, const ConfusableMap& map, std::vector<NormalizationEdit>& edits) {
  // Tokens (runs of letters, digits, '_' and '-') that contain ASCII letters or digits.
  std::vector<bool> mixed(w.text.size(), false);
  for (std::size_t i = 0; i < w.text.size();) {
    if (!is_token_char(w.text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    bool ascii = false;
    while (j < w.text.size() && is_token_char(w.text[j])) ascii |= is_ascii_alnum(w.text[j++]);
    for (std::size_t k = i; k < j; ++k) mixed[k] = ascii;
    i = j;
  }
  return sweep(w, EvasionRule::confusable, edits,
               [&](std::u32string_view, std::u32string_view in, std::size_t i) -> std::optional<std::u32string> {
                 const auto* rep = map.find(in[i]);
                 if (rep == nullptr) return std::nullopt;
                 if (only_ascii_digits(*rep) && !is_alnum(in[i])) return *rep;
                 if (mixed[i]) return *rep;
                 return std::nullopt;
               });
}

bool period_pass(Work& w, std::vector<NormalizationEdit>& edits) {
  return sweep(w, EvasionRule::period_separator, edits,
               [](std::u32string_view done, std::u32string_view in, std::size_t i) -> std::optional<std::u32string> {
                 if (kPeriodMarks.find(in[i]) == std::u32string_view::npos) return std::nullopt;
                 if (done.empty() || !is_ascii_alnum(done.back())) return std::nullopt;
                 if (i + 1 >= in.size() || !is_ascii_alnum(in[i + 1])) return std::nullopt;
                 return std::u32string(U".");
               });
}

bool zero_width_pass(Work& w, std::vector<NormalizationEdit>& edits) {
  return sweep(w, EvasionRule::zero_width, edits,
               [](std::u32string_view, std::u32string_view in, std::size_t i) -> std::optional<std::u32string> {
                 if (kZeroWidth.find(in[i]) == std::u32string_view::npos) return std::nullopt;
                 return std::u32string();
               });
}

bool decorative_pass(Work& w, std::vector<NormalizationEdit>& edits) {
  return sweep(w, EvasionRule::decorative_symbol, edits,
               [](std::u32string_view done, std::u32string_view in, std::size_t i) -> std::optional<std::u32string> {
                 const char32_t c = in[i];
                 if (c < 0x80 || !is_symbol_or_emoji(c)) return std::nullopt;
                 if (done.empty() || !is_ascii_alnum(done.back())) return std::nullopt;
                 if (i + 1 >= in.size() || !is_ascii_alnum(in[i + 1])) return std::nullopt;
                 std::size_t l = done.size();
                 while (l > 0 && is_run_char(done[l - 1])) --l;
                 std::size_t r = i + 1;
                 while (r < in.size() && is_run_char(in[r])) ++r;
                 const auto left = to_utf8(done.substr(l));
                 const auto right = to_utf8(in.substr(i + 1, r - i - 1));
                 if (!valid_as_same(left, right, left + right)) return std::nullopt;
                 return std::u32string();
               });
}

}  // namespace

std::string_view to_string(EvasionRule r) {
  switch (r) {
    case EvasionRule::compatibility_fold: return "compatibility_fold";
    case EvasionRule::confusable: return "confusable";
    case EvasionRule::period_separator: return "period_separator";
    case EvasionRule::zero_width: return "zero_width";
    case EvasionRule::decorative_symbol: return "decorative_symbol";
  }
  return "unknown";
}

const ConfusableMap& ConfusableMap::builtin() {
  static const ConfusableMap map = parse(detail::kBuiltinConfusables);
  return map;
}

ConfusableMap ConfusableMap::parse(std::string_view tsv) {
  ConfusableMap m;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < tsv.size()) {
    auto eol = tsv.find('\n', pos);
    if (eol == std::string_view::npos) eol = tsv.size();
    std::string_view line = tsv.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || line.substr(0, 2) != "U+" || tab == line.size() - 1)
      throw Error("confusables line " + std::to_string(line_no) + ": expected U+XXXX<TAB>replacement");
    std::size_t used = 0;
    unsigned long cp = 0;
    try {
      cp = std::stoul(std::string(line.substr(2, tab - 2)), &used, 16);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tab - 2 || used == 0 || cp > 0x10FFFF)
      throw Error("confusables line " + std::to_string(line_no) + ": bad code point");
    m.map_[static_cast<char32_t>(cp)] = to_u32(line.substr(tab + 1));
  }
  return m;
}

ConfusableMap ConfusableMap::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageIoError("cannot read confusables map " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const std::u32string* ConfusableMap::find(char32_t cp) const {
  const auto it = map_.find(cp);
  return it == map_.end() ? nullptr : &it->second;
}

NormalizationTrace normalize_evasions(std::string_view text, const ConfusableMap& confusables) {
  Work w;
  w.text = to_u32(text);
  w.origin.resize(w.text.size());
  for (std::size_t i = 0; i < w.origin.size(); ++i) w.origin[i] = i;
  NormalizationTrace trace;
  for (int round = 0; round < kMaxRounds; ++round) {
    bool changed = fold_pass(w, trace.edits);
    changed |= confusable_pass(w, confusables, trace.edits);
    changed |= period_pass(w, trace.edits);
    changed |= zero_width_pass(w, trace.edits);
    changed |= decorative_pass(w, trace.edits);
    if (!changed) break;
  }
  trace.normalized_text = to_utf8(w.text);
  trace.origin = std::move(w.origin);
  return trace;
}

std::string replay_edits(std::string_view original, const std::vector<NormalizationEdit>& edits) {
  auto text = to_u32(original);
  for (const auto& e : edits) {
    const auto from = to_u32(e.original);
    if (e.offset > text.size() || text.compare(e.offset, from.size(), from) != 0)
      throw InvariantViolation("edit at offset " + std::to_string(e.offset) + " does not match the text");
    text.replace(e.offset, from.size(), to_u32(e.replacement));
  }
  return to_utf8(text);
}

}  // namespace ipthunt
