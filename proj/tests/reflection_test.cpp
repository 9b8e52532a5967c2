#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "ipthunt/core/errors.hpp"
#include "ipthunt/core/text.hpp"
#include "ipthunt/core/url.hpp"
#include "ipthunt/reflection/public_suffix.hpp"
#include "ipthunt/reflection/reflection.hpp"

namespace ipthunt {
namespace {

SearchResultEntry entry_for(const std::string& url) {
  SearchResultEntry e;
  e.url = url;
  return e;
}

ReflectionFinding finding(const std::string& url, std::vector<ReflectedParam> params) {
  return ReflectionFinding{url, std::move(params)};
}

std::string random_value(std::mt19937& rng) {
  static const std::u32string alphabet = U"abcxyz0129 -_.~办证微信😀&=?/#%+";
  std::uniform_int_distribution<std::size_t> len(3, 12), pick(0, alphabet.size() - 1);
  std::u32string s;
  for (std::size_t i = len(rng); i > 0; --i) s.push_back(alphabet[pick(rng)]);
  return to_utf8(s);
}

const std::vector<std::string>& templates() {
  static const std::vector<std::string> t{
      "https://search.bilibili.com/all?keyword={R}",
      "https://www.pixiv.net/tags/{R}",
      "https://ex.org/s?lang=en&q={R}&page=1",
      "http://shop.example.co.uk:8080/find/{R}",
      "https://a.b.ac.jp/search?q={R}",
  };
  return t;
}

TEST(DetectReflectionTest, Examples) {
  const auto yt = detect_reflection(entry_for("https://www.youtube.com/results?search_query=reflection-text"),
                                    {{ReflectionLocation::title, "reflection-text - YouTube"}});
  ASSERT_TRUE(yt.has_value());
  EXPECT_EQ(yt->reflected_params,
            (std::vector<ReflectedParam>{{"search_query", "reflection-text", ReflectionLocation::title}}));

  EXPECT_FALSE(detect_reflection(entry_for("https://ex.org/s?q=a"), {{ReflectionLocation::body_text, "a a a"}}));

  const auto multi = detect_reflection(entry_for("https://ex.org/s?q=foo%20bar&page=2"),
                                       {{ReflectionLocation::body_text, "results for foo bar"}});
  ASSERT_TRUE(multi.has_value());
  ASSERT_EQ(multi->reflected_params.size(), 1u);
  EXPECT_EQ(multi->reflected_params[0].param_name, "q");
  EXPECT_EQ(multi->reflected_params[0].param_value, "foo bar");

  EXPECT_THROW(detect_reflection(entry_for("no scheme"), {}), MalformedUrl);
}

TEST(DetectReflectionTest, PathSegmentAndPlusDecoding) {
  const auto path = detect_reflection(entry_for("https://www.pixiv.net/tags/%E5%8A%9E%E8%AF%81%E4%BB%B6"),
                                      {{ReflectionLocation::metadata, "办证件 tags"}});
  ASSERT_TRUE(path.has_value());
  EXPECT_EQ(path->reflected_params[0].param_name, "path:1");
  const auto plus = detect_reflection(entry_for("https://ex.org/s?q=a+b+c"), {{ReflectionLocation::anchor, "x a b c"}});
  ASSERT_TRUE(plus.has_value());
  EXPECT_EQ(plus->reflected_params[0].param_value, "a b c");
  // Decoding happens once.
  EXPECT_FALSE(detect_reflection(entry_for("https://ex.org/s?q=%2541bc"), {{ReflectionLocation::title, "Abc"}}));
}

TEST(DetectReflectionTest, FindingsSelfVerify) {
  std::mt19937 rng(17);
  const std::vector<std::string> words{"abc", "hello", "ab", "办证微信", "x", "foo bar", "qq123"};
  for (int i = 0; i < 300; ++i) {
    std::uniform_int_distribution<std::size_t> w(0, words.size() - 1);
    const auto a = words[w(rng)], b = words[w(rng)], c = words[w(rng)];
    const auto url = "https://ex.org/p/" + percent_encode(c) + "?k=" + percent_encode(a) + "&m=" + percent_encode(b);
    PageText page;
    for (auto loc : all_locations())
      if (rng() % 3 == 0) page[loc] = words[w(rng)] + " " + words[w(rng)];
    const auto f = detect_reflection(entry_for(url), page);
    if (!f) continue;
    ASSERT_FALSE(f->reflected_params.empty());
    for (const auto& p : f->reflected_params) {
      EXPECT_GE(p.param_value.size(), 3u);
      EXPECT_NE(page.at(p.location).find(p.param_value), std::string::npos);
    }
  }
}

TEST(CanonicalizeTest, Examples) {
  const auto bili = canonicalize_urs(finding("https://search.bilibili.com/all?keyword=XYZ",
                                             {{"keyword", "XYZ", ReflectionLocation::title}}));
  EXPECT_EQ(bili.template_url, "https://search.bilibili.com/all?keyword={R}");
  EXPECT_EQ(bili.fqdn, "search.bilibili.com");
  EXPECT_EQ(bili.apex_domain, "bilibili.com");
  EXPECT_EQ(bili.reflection_param, ReflectionParam{std::string("keyword")});

  const auto pixiv =
      canonicalize_urs(finding("https://www.pixiv.net/tags/XYZ", {{"path:1", "XYZ", ReflectionLocation::title}}));
  EXPECT_EQ(pixiv.template_url, "https://www.pixiv.net/tags/{R}");
  EXPECT_EQ(pixiv.reflection_param, ReflectionParam{std::size_t{1}});

  const auto first = canonicalize_urs(finding("https://ex.org/s/abc?a=xyz&b=qwe#frag",
                                              {{"path:1", "abc", ReflectionLocation::title},
                                               {"a", "xyz", ReflectionLocation::title},
                                               {"b", "qwe", ReflectionLocation::title}}));
  EXPECT_EQ(first.template_url, "https://ex.org/s/abc?a={R}&b=qwe");
}

TEST(MatchUrsTest, Examples) {
  const auto urs = urs_from_template("https://a.b/s?q={R}");
  EXPECT_EQ(match_urs(urs, "https://a.b/s?q=hello"), "hello");
  EXPECT_FALSE(match_urs(urs, "https://a.b/s?q=hello&x=1"));
  EXPECT_FALSE(match_urs(urs, "https://c.d/s?q=hello"));
  const auto multi = urs_from_template("https://a.b/s?lang=en&q={R}");
  EXPECT_EQ(match_urs(multi, "https://a.b/s?q=x%20y&lang=en"), "x y");
  EXPECT_EQ(urs_prefix(multi), "https://a.b/s?lang=en&q=");
}

TEST(RoundTripTest, CanonicalizeInstantiateIsIdentity) {
  std::mt19937 rng(23);
  for (int i = 0; i < 500; ++i) {
    const auto& t = templates()[i % templates().size()];
    const auto value = random_value(rng);
    const auto url = instantiate(t, value);
    ASSERT_TRUE(try_parse_url(url).has_value()) << url;
    const auto urs = urs_from_template(t);
    const auto got = match_urs(urs, url);
    ASSERT_TRUE(got.has_value()) << url;
    EXPECT_EQ(*got, value);
    const std::string name =
        std::holds_alternative<std::string>(urs.reflection_param)
            ? std::get<std::string>(urs.reflection_param)
            : "path:" + std::to_string(std::get<std::size_t>(urs.reflection_param));
    EXPECT_EQ(canonicalize_urs(finding(url, {{name, value, ReflectionLocation::body_text}})).template_url, t);
  }
}

TEST(RoundTripTest, GroupingByMatchRecoversTemplatePartition) {
  std::mt19937 rng(29);
  std::vector<std::pair<std::string, std::size_t>> urls;
  for (int i = 0; i < 60; ++i) {
    const std::size_t t = rng() % templates().size();
    urls.emplace_back(instantiate(templates()[t], random_value(rng)), t);
  }
  for (const auto& [url, t] : urls)
    for (std::size_t k = 0; k < templates().size(); ++k)
      EXPECT_EQ(match_urs(urs_from_template(templates()[k]), url).has_value(), k == t) << url;
}

TEST(PublicSuffixTest, ApexDomains) {
  EXPECT_EQ(apex_domain("search.bilibili.com"), "bilibili.com");
  EXPECT_EQ(apex_domain("shop.example.co.uk"), "example.co.uk");
  EXPECT_EQ(apex_domain("a.b.ac.jp"), "b.ac.jp");
  EXPECT_EQ(apex_domain("localhost"), "localhost");
  EXPECT_EQ(apex_domain("127.0.0.1"), "127.0.0.1");
  EXPECT_EQ(public_suffix("x.co.uk"), "co.uk");
}

}  // namespace
}  // namespace ipthunt
