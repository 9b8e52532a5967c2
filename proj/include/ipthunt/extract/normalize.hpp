#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ipthunt {

enum class EvasionRule {
  compatibility_fold = 1,
  confusable = 2,
  period_separator = 3,
  zero_width = 4,
  decorative_symbol = 5,
};

std::string_view to_string(EvasionRule r);

// One replacement, applied to the string produced by the edits before it.
// `offset` counts scalar values in that intermediate string.
struct NormalizationEdit {
  std::size_t offset = 0;
  std::string original;
  std::string replacement;
  EvasionRule rule = EvasionRule::compatibility_fold;
  bool operator==(const NormalizationEdit&) const = default;
};

struct NormalizationTrace {
  std::string normalized_text;
  std::vector<NormalizationEdit> edits;
  // For every scalar value of normalized_text, its offset in the input.
  std::vector<std::size_t> origin;
};

// Code point to replacement map. Text form: one `U+XXXX<TAB>replacement`
// per line; blank lines and lines starting with '#' are skipped.
class ConfusableMap {
 public:
  static const ConfusableMap& builtin();
  static ConfusableMap parse(std::string_view tsv);
  static ConfusableMap load(const std::string& path);

  const std::u32string* find(char32_t cp) const;
  std::size_t size() const { return map_.size(); }

 private:
  std::unordered_map<char32_t, std::u32string> map_;
};

// Applies the five rewrite rules in order and repeats until a full pass makes
// no change:
//   1. single code points whose compatibility form is one printable ASCII char
//   2. confusables: digit forms anywhere, letter lookalikes inside tokens that
//      already contain ASCII letters or digits
//   3. '。' / '点' between ASCII alphanumerics becomes '.'
//   4. zero-width, joiner and variation-selector characters are removed
//   5. one symbol or emoji between two ASCII runs is removed when the joined
//      run is a valid contact value and the two halves are not both valid
NormalizationTrace normalize_evasions(std::string_view text,
                                      const ConfusableMap& confusables = ConfusableMap::builtin());

// Applies `edits` to `original` in order. Throws InvariantViolation when an
// edit does not match the text at its offset.
std::string replay_edits(std::string_view original, const std::vector<NormalizationEdit>& edits);

}  // namespace ipthunt
