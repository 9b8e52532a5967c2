#include "ipthunt/report/language.hpp"

#include <map>
#include <vector>

#include <unicode/uchar.h>
#include <unicode/uscript.h>

#include "ipthunt/core/text.hpp"

namespace ipthunt {

namespace {

std::string tag_for(UScriptCode script) {
  switch (script) {
    case USCRIPT_HAN: return "zh";
    case USCRIPT_HANGUL: return "ko";
    case USCRIPT_HIRAGANA:
    case USCRIPT_KATAKANA: return "ja";
    case USCRIPT_LATIN: return "und-Latn";
    default: return std::string("und-") + uscript_getShortName(script);
  }
}

}  // namespace

std::string ScriptMajorityIdentifier::tag(std::string_view text) const {
  std::map<std::string, std::size_t> counts;
  std::vector<std::string> order;
  std::size_t han = 0;
  bool kana = false;
  for (char32_t cp : to_u32(text)) {
    if (!u_isalpha(static_cast<UChar32>(cp))) continue;
    UErrorCode err = U_ZERO_ERROR;
    const auto script = uscript_getScript(static_cast<UChar32>(cp), &err);
    if (U_FAILURE(err) || script == USCRIPT_COMMON || script == USCRIPT_INHERITED || script == USCRIPT_UNKNOWN) continue;
    if (script == USCRIPT_HAN) ++han;
    if (script == USCRIPT_HIRAGANA || script == USCRIPT_KATAKANA) kana = true;
    const auto tag = tag_for(script);
    if (counts[tag]++ == 0) order.push_back(tag);
  }
  if (kana && han > 0) {
    counts["ja"] += han;
    counts["zh"] -= han;
  }
  std::string best = "und";
  std::size_t best_count = 0;
  for (const auto& t : order) {
    if (counts[t] > best_count) {
      best = t;
      best_count = counts[t];
    }
  }
  return best;
}

std::string tag_language(std::string_view text) { return ScriptMajorityIdentifier().tag(text); }

}  // namespace ipthunt
