#include <gtest/gtest.h>

#include <chrono>

#include "ipthunt/core/contact_grammar.hpp"
#include "ipthunt/core/errors.hpp"
#include "ipthunt/core/text.hpp"
#include "ipthunt/desk/models.hpp"
#include "ipthunt/extract/contacts.hpp"
#include "ipthunt/extract/normalize.hpp"
#include "ipthunt/extract/segment.hpp"
#include "ipthunt/extract/urls.hpp"
#include "ipthunt/textfeat/features.hpp"

namespace ipthunt {
namespace {

std::vector<std::string> texts(const std::vector<IptSegment>& segs) {
  std::vector<std::string> out;
  for (const auto& s : segs) out.push_back(s.text);
  return out;
}

std::vector<std::pair<ContactKind, std::string>> pairs(const std::vector<Contact>& cs) {
  std::vector<std::pair<ContactKind, std::string>> out;
  for (const auto& c : cs) out.emplace_back(c.kind, c.value);
  return out;
}

const desk::ModelBundle& models() { return desk::default_models(); }

TEST(UrlTest, Examples) {
  const auto a = extract_urls("visit a.com now");
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].url, "a.com");
  EXPECT_EQ(a[0].span, (Span{6, 11}));
  const auto b = extract_urls("ncao3.com是网站");
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].url, "ncao3.com");
  EXPECT_EQ(b[0].span, (Span{0, 9}));
  EXPECT_TRUE(extract_urls("價格3.5元").empty());
}

TEST(SegmentTest, Examples) {
  EXPECT_EQ(texts(segment_ipt("【加V】abc123")), (std::vector<std::string>{"加V", "abc123"}));
  const auto one = segment_ipt("no separators");
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].kind, SegmentKind::candidate);
  EXPECT_EQ(one[0].text, "no separators");
  const auto mixed = segment_ipt("看a.com【微abc】");
  ASSERT_EQ(mixed.size(), 3u);
  EXPECT_EQ(mixed[0].text, "看");
  EXPECT_EQ(mixed[1].kind, SegmentKind::url);
  EXPECT_EQ(mixed[1].text, "a.com");
  EXPECT_EQ(mixed[2].text, "微abc");
  EXPECT_EQ(mixed[2].kind, SegmentKind::candidate);
}

TEST(SegmentTest, SpansPartitionTheText) {
  SplitMix64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const std::string text = i % 2 ? desk::make_ipt(rng).text : desk::make_benign(rng);
    const auto chars = to_u32(text);
    std::size_t pos = 0;
    std::u32string rebuilt;
    for (const auto& s : segment_ipt(text)) {
      ASSERT_LE(pos, s.span.start);
      // the gap holds only separators and whitespace
      for (std::size_t k = pos; k < s.span.start; ++k)
        EXPECT_TRUE(is_segment_separator(chars[k]) || is_whitespace(chars[k])) << text;
      rebuilt += chars.substr(pos, s.span.start - pos);
      const auto seg = chars.substr(s.span.start, s.span.end - s.span.start);
      EXPECT_EQ(to_utf8(seg), s.text);
      rebuilt += seg;
      pos = s.span.end;
    }
    rebuilt += chars.substr(pos);
    EXPECT_EQ(rebuilt, chars);
  }
}

TEST(KeywordTest, Examples) {
  const auto& seg = models().segment;
  const auto keys = extract_keywords("FIFA23金币【cheapfifa23coins.com】秒到账", seg);
  EXPECT_NE(std::find(keys.begin(), keys.end(), "cheapfifa23coins.com"), keys.end());
  EXPECT_TRUE(extract_keywords("how to bake bread", seg).empty());
  EXPECT_EQ(extract_keywords("办证【询telegram:@ts775】", seg), (std::vector<std::string>{"询telegram:@ts775"}));
}

TEST(KeywordTest, ContactSegmentOracle) {
  // Manual feature computation for the contact segment, then a tree walk.
  const auto f = contact_segment_features("询telegram:@ts775");
  EXPECT_EQ(f.char_len, 16u);
  EXPECT_EQ(f.contact_indicator_count, 2u);
  EXPECT_EQ(f.separator_punct_count, 1u);
  EXPECT_EQ(f.digit_count, 3u);
  EXPECT_EQ(f.alnum_count, 14u);
  EXPECT_EQ(f.non_alnum_count, 2u);
  const auto& m = models().segment;
  const auto x = f.to_array();
  double sum = 0;
  for (const auto& t : m.trees) {
    int node = 0;
    while (t.feature[node] >= 0) node = x[t.feature[node]] <= t.threshold[node] ? t.left[node] : t.right[node];
    sum += t.value[node][1];
  }
  EXPECT_GE(sum / m.trees.size(), 0.5);
  EXPECT_TRUE(is_contact_segment("询telegram:@ts775", m));
}

TEST(KeywordTest, WrongModelDimension) {
  EXPECT_THROW(extract_keywords("a.com", models().binary), DimensionMismatch);
}

TEST(NormalizeTest, Examples) {
  EXPECT_EQ(normalize_evasions("ｑｑ１２３４５").normalized_text, "qq12345");
  EXPECT_EQ(normalize_evasions("abc。com").normalized_text, "abc.com");
  const auto plain = normalize_evasions("plain text");
  EXPECT_EQ(plain.normalized_text, "plain text");
  EXPECT_TRUE(plain.edits.empty());
}

TEST(NormalizeTest, EachRule) {
  EXPECT_EQ(normalize_evasions("tg:@tѕ775").normalized_text, "tg:@ts775");            // Cyrillic dze
  EXPECT_EQ(normalize_evasions("QQ:➀２③4５6").normalized_text, "QQ:123456");           // dingbat, fullwidth, circled
  EXPECT_EQ(normalize_evasions("привет мир").normalized_text, "привет мир");          // no ASCII, untouched
  EXPECT_EQ(normalize_evasions("abc点com").normalized_text, "abc.com");
  EXPECT_EQ(normalize_evasions("3点钟").normalized_text, "3点钟");
  EXPECT_EQ(normalize_evasions("ts​775").normalized_text, "ts775");
  EXPECT_EQ(normalize_evasions("telegram:@ts★775").normalized_text, "telegram:@ts775");
  EXPECT_EQ(normalize_evasions("abc123❤def456").normalized_text, "abc123❤def456");  // both halves valid
  const auto t = normalize_evasions("ｔｇ：@ｔｓ７７５");
  EXPECT_EQ(t.normalized_text, "tg:@ts775");
  for (const auto& e : t.edits) EXPECT_EQ(e.rule, EvasionRule::compatibility_fold);
}

TEST(NormalizeTest, ReplayAndIdempotence) {
  SplitMix64 rng(9);
  const std::vector<std::string> noise{"ｑ", "。", "点", "‍", "★", "а", "➂", "ｔｇ", "💰", "Ｗ", "ο"};
  for (int i = 0; i < 300; ++i) {
    std::string text = desk::make_ipt(rng).text;
    auto chars = to_u32(text);
    for (int k = 0; k < 3; ++k) {
      const auto at = rng.below(chars.size() + 1);
      chars.insert(at, to_u32(noise[rng.below(noise.size())]));
    }
    text = to_utf8(chars);
    const auto trace = normalize_evasions(text);
    EXPECT_EQ(replay_edits(text, trace.edits), trace.normalized_text);
    EXPECT_EQ(trace.origin.size(), scalar_length(trace.normalized_text));
    const auto again = normalize_evasions(trace.normalized_text);
    EXPECT_TRUE(again.edits.empty()) << text;
    EXPECT_EQ(again.normalized_text, trace.normalized_text);
  }
}

TEST(NormalizeTest, ConfusableFileFormat) {
  const auto m = ConfusableMap::parse("# comment\nU+0430\ta\n\nU+2460\t1\n");
  EXPECT_EQ(m.size(), 2u);
  ASSERT_NE(m.find(U'а'), nullptr);
  EXPECT_EQ(*m.find(U'а'), U"a");
  EXPECT_THROW(ConfusableMap::parse("0430 a\n"), Error);
  EXPECT_GE(ConfusableMap::builtin().size(), 200u);
}

TEST(ContactTypeTest, Examples) {
  const auto& m = models().contact_type;
  EXPECT_EQ(classify_contact_type("办证 询telegram:@ts775", m), ContactKind::Telegram);
  EXPECT_EQ(classify_contact_type("ncao3.com", m), ContactKind::Website);
  EXPECT_EQ(classify_contact_type("今天天气不错", m), ContactKind::Other);
}

TEST(ContactEntityTest, Examples) {
  EXPECT_EQ(pairs(extract_contact_entities("询telegram:@ts775", ContactKind::Telegram)),
            (std::vector<std::pair<ContactKind, std::string>>{{ContactKind::Telegram, "ts775"}}));
  EXPECT_EQ(pairs(extract_contact_entities("加扣扣123456", ContactKind::QQ)),
            (std::vector<std::pair<ContactKind, std::string>>{{ContactKind::QQ, "123456"}}));
  EXPECT_TRUE(extract_contact_entities("飞机@a", ContactKind::Telegram).empty());
  EXPECT_TRUE(extract_contact_entities("QQ:012345", ContactKind::QQ).empty());
  EXPECT_EQ(pairs(extract_contact_entities("电话:13812345678 QQ:55555", ContactKind::Phone)),
            (std::vector<std::pair<ContactKind, std::string>>{{ContactKind::Phone, "13812345678"}}));
  EXPECT_TRUE(extract_contact_entities("mail me at bob@example.com", ContactKind::Telegram).empty());
}

TEST(ContactTest, EndToEnd) {
  const auto& m = models().contact_type;
  EXPECT_EQ(pairs(extract_contacts("办证【微:abc_888】看a.com", m)),
            (std::vector<std::pair<ContactKind, std::string>>{{ContactKind::WeChat, "abc_888"},
                                                               {ContactKind::Website, "a.com"}}));
  EXPECT_TRUE(extract_contacts("how to bake bread", m).empty());
  const auto tg = extract_contacts("ｔｇ：@ｔｓ７７５", m, "ipt-1");
  ASSERT_EQ(tg.size(), 1u);
  EXPECT_EQ(tg[0].kind, ContactKind::Telegram);
  EXPECT_EQ(tg[0].value, "ts775");
  EXPECT_EQ(tg[0].raw_span, (Span{4, 9}));  // fullwidth handle in the original text
  EXPECT_EQ(tg[0].source_ipt, "ipt-1");
}

TEST(ContactTest, OutputsSelfValidate) {
  const auto& m = models().contact_type;
  SplitMix64 rng(31);
  for (int i = 0; i < 400; ++i) {
    const auto text = i % 3 ? desk::make_ipt(rng).text : desk::make_benign(rng);
    for (const auto& c : extract_contacts(text, m)) {
      EXPECT_TRUE(valid_contact_value(c.kind, c.value)) << text;
      EXPECT_LE(c.raw_span.end, scalar_length(text));
    }
  }
}

TEST(ContactTest, StableUnderEvasionPerturbations) {
  const auto& m = models().contact_type;
  // Each perturbation is the inverse of one normalization rule.
  const std::vector<std::pair<std::string, std::string>> cases{
      {"代办毕业证 QQ:123456", "代办毕业证 ＱＱ:１２３４５６"},
      {"代办毕业证 tg:@ts775", "代办毕业证 tg:@tѕ775"},
      {"博彩 网址 ncao3.com", "博彩 网址 ncao3。com"},
      {"博彩 微信:abc_888", "博彩 微信:abc​_888"},
      {"博彩 telegram:@ts775", "博彩 telegram:@ts★775"},
  };
  for (const auto& [clean, perturbed] : cases)
    EXPECT_EQ(pairs(extract_contacts(clean, m)), pairs(extract_contacts(perturbed, m))) << perturbed;
}

}  // namespace
}  // namespace ipthunt
