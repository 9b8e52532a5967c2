#pragma once

#include <string>
#include <string_view>

namespace ipthunt {

class LanguageIdentifier {
 public:
  virtual ~LanguageIdentifier() = default;
  virtual std::string tag(std::string_view text) const = 0;
};

// Approximate tagging by the script holding the most letters: Han -> zh,
// Hangul -> ko, Hiragana/Katakana -> ja (Han letters count towards ja once
// kana is present), Latin -> und-Latn, any other script -> und-<ISO 15924>,
// no letters -> und. Ties go to the script seen first.
class ScriptMajorityIdentifier final : public LanguageIdentifier {
 public:
  std::string tag(std::string_view text) const override;
};

std::string tag_language(std::string_view text);

}  // namespace ipthunt
