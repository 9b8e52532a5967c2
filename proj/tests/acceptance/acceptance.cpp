// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ipthunt/core/contact_grammar.hpp"
#include "ipthunt/core/store.hpp"
#include "ipthunt/core/text.hpp"
#include "ipthunt/core/url.hpp"
#include "ipthunt/desk/corpus.hpp"
#include "ipthunt/desk/fixtures.hpp"
#include "ipthunt/desk/models.hpp"
#include "ipthunt/desk/world.hpp"
#include "ipthunt/extract/contacts.hpp"
#include "ipthunt/hunter/hunt.hpp"
#include "ipthunt/infiltrate/fetch.hpp"
#include "ipthunt/infiltrate/site.hpp"
#include "ipthunt/infiltrate/telegram.hpp"
#include "ipthunt/learn/metrics.hpp"
#include "ipthunt/reflection/reflection.hpp"
#include "ipthunt/report/cli.hpp"
#include "support/feature_oracle.hpp"

namespace ipthunt {
namespace {

namespace fs = std::filesystem;
using Seconds = std::chrono::duration<double>;

// Pinned tolerances and limits.
constexpr double kFeatureBudgetSeconds = 5.0;
constexpr std::size_t kFeatureStrings = 1000;
constexpr double kBinaryBudgetSeconds = 60.0;
constexpr std::size_t kBinaryTexts = 600;
constexpr double kBinaryMinPrecision = 0.90;
constexpr double kBinaryMinRecall = 0.90;
constexpr std::size_t kUrsPairs = 500;
constexpr std::size_t kContactMinExact = 48;
constexpr std::size_t kWorldIpts = 100;
constexpr std::size_t kWorldSites = 5;
constexpr std::size_t kWorldMinFound = 90;
constexpr std::size_t kWorldRounds = 6;
constexpr double kWorldBudgetSeconds = 30.0;
constexpr double kLrapTolerance = 1e-9;

const Timestamp kT0 = parse_timestamp("2024-03-01T00:00:00Z");

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Timer {
 public:
  double seconds() const { return Seconds(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ipthunt-acceptance-" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const desk::ModelBundle& models() { return desk::default_models(); }

ScenarioResponse page(std::string body, int status = 200) { return {status, {}, std::move(body), std::nullopt}; }
ScenarioResponse redirect(std::string to, int status = 302) { return {status, {}, "", std::move(to)}; }

// 1 -------------------------------------------------------------------------

Outcome feature_oracle() {
  Timer timer;
  std::mt19937 rng(2024);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < kFeatureStrings; ++i) {
    const auto s = oracle::random_sample(rng);
    const auto utf8 = to_utf8(s.text);
    mismatches += !(binary_ipt_features(utf8) == oracle::binary(s));
    mismatches += !(contact_segment_features(utf8) == oracle::segment(s));
  }
  const double t = timer.seconds();
  return {mismatches == 0 && t < kFeatureBudgetSeconds,
          std::to_string(kFeatureStrings) + " strings, " + std::to_string(mismatches) + " mismatching vectors, " +
              fmt("%.2f s", t)};
}

// 2 -------------------------------------------------------------------------

Outcome binary_benchmark() {
  Timer timer;
  const auto samples = desk::binary_corpus(kBinaryTexts / 2, 20240301);
  EnsembleParams params;
  params.seed = 5;
  const auto report = desk::cross_validate_binary(samples, 5, params, 9);
  const auto& m = report.per_class.at(0);
  const double t = timer.seconds();
  return {m.precision >= kBinaryMinPrecision && m.recall >= kBinaryMinRecall && t < kBinaryBudgetSeconds,
          std::to_string(samples.size()) + " texts, precision " + fmt("%.4f", m.precision) + ", recall " +
              fmt("%.4f", m.recall) + ", " + fmt("%.1f s", t)};
}

// 3 -------------------------------------------------------------------------

Outcome reflection_detection() {
  struct Page {
    std::string url;
    PageText text;
    bool reflects;
  };
  std::vector<Page> pages;
  const std::vector<ReflectionLocation> planted_at{ReflectionLocation::title, ReflectionLocation::body_text,
                                                   ReflectionLocation::metadata};
  for (int i = 0; i < 10; ++i) {
    const auto value = "办证加微信abc" + std::to_string(100 + i);
    const auto url = "https://site" + std::to_string(i) + ".org/search?lang=en&q=" + percent_encode(value);
    PageText t;
    t[planted_at[i % 3]] = "results for " + value + " page";
    t[ReflectionLocation::anchor] = "home en";
    pages.push_back({url, t, true});
  }
  for (int i = 0; i < 30; ++i) {
    const auto n = std::to_string(i);
    PageText t;
    std::string url;
    if (i < 10) {
      // Values of one or two characters shown on the page.
      url = "https://neg" + n + ".org/s?q=" + std::string(1 + i % 2, 'z') + "&p=" + std::to_string(i % 10);
      t[ReflectionLocation::body_text] = "zz z " + std::to_string(i % 10);
    } else if (i < 20) {
      // Values that the page does not show.
      url = "https://neg" + n + ".org/s?q=cheap" + n + "watches";
      t[ReflectionLocation::title] = "cheap watches";
      t[ReflectionLocation::body_text] = "watches cheap " + n;
    } else {
      // Double-encoded values are decoded once and then do not match.
      url = "https://neg" + n + ".org/tags/%2541bc" + n;
      t[ReflectionLocation::metadata] = "Abc" + n;
    }
    pages.push_back({url, t, false});
  }
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& p : pages) {
    SearchResultEntry e;
    e.url = p.url;
    const bool found = detect_reflection(e, p.text).has_value();
    tp += found && p.reflects;
    fp += found && !p.reflects;
    fn += !found && p.reflects;
  }
  return {tp == 10 && fp == 0 && fn == 0,
          std::to_string(pages.size()) + " pages, tp " + std::to_string(tp) + ", fp " + std::to_string(fp) +
              ", fn " + std::to_string(fn)};
}

// 4 -------------------------------------------------------------------------

std::string random_word(std::mt19937& rng, std::size_t min, std::size_t max) {
  static const std::string letters = "abcdefghijklmnopqrstuvwxyz";
  std::uniform_int_distribution<std::size_t> len(min, max), pick(0, letters.size() - 1);
  std::string s;
  for (std::size_t i = len(rng); i > 0; --i) s.push_back(letters[pick(rng)]);
  return s;
}

std::string random_template(std::mt19937& rng) {
  static const std::vector<std::string> tlds{"com", "org", "net", "co.uk", "com.cn", "io"};
  std::string url = rng() % 2 ? "https://" : "http://";
  if (rng() % 2) url += random_word(rng, 3, 6) + ".";
  url += random_word(rng, 3, 8) + "." + tlds[rng() % tlds.size()];
  if (rng() % 4 == 0) url += ":" + std::to_string(8000 + rng() % 100);
  const std::size_t segments = rng() % 3;
  for (std::size_t i = 0; i < segments; ++i) url += "/" + random_word(rng, 3, 7);
  const bool path_slot = rng() % 3 == 0;
  std::vector<std::string> params;
  for (std::size_t i = rng() % 3; i > 0; --i) params.push_back(random_word(rng, 3, 5) + "=" + random_word(rng, 3, 6));
  if (path_slot) {
    url += "/{R}";
  } else {
    url += "/" + random_word(rng, 3, 7);
    params.insert(params.begin() + static_cast<long>(rng() % (params.size() + 1)), random_word(rng, 1, 6) + "={R}");
  }
  for (std::size_t i = 0; i < params.size(); ++i) url += (i ? "&" : "?") + params[i];
  return url;
}

std::string random_value(std::mt19937& rng) {
  static const std::u32string alphabet = U"办证微信飞机赌场0123456789 -_.~😀&=?/#%+，。";
  std::uniform_int_distribution<std::size_t> len(3, 14), pick(0, alphabet.size() - 1);
  std::u32string s;
  for (std::size_t i = len(rng); i > 0; --i) s.push_back(alphabet[pick(rng)]);
  return to_utf8(s);
}

Outcome urs_round_trip() {
  std::mt19937 rng(77);
  std::size_t ok = 0;
  std::string first_failure;
  for (std::size_t i = 0; i < kUrsPairs; ++i) {
    const auto t = random_template(rng);
    const auto value = random_value(rng);
    SearchResultEntry e;
    e.url = instantiate(t, value);
    bool good = false;
    try {
      const auto finding = detect_reflection(e, {{ReflectionLocation::body_text, "found: " + value}});
      good = finding && canonicalize_urs(*finding).template_url == t && reflected_value(*finding) == value &&
             match_urs(urs_from_template(t), e.url) == value;
    } catch (const Error&) {
      good = false;
    }
    ok += good;
    if (!good && first_failure.empty()) first_failure = ", first failure " + t + " <- " + e.url;
  }
  return {ok == kUrsPairs, std::to_string(ok) + "/" + std::to_string(kUrsPairs) + " round trips" + first_failure};
}

// 5 -------------------------------------------------------------------------

struct ContactCase {
  std::string text;
  std::vector<std::pair<ContactKind, std::string>> expected;
};

std::vector<ContactCase> contact_cases() {
  using K = ContactKind;
  return {
      // Telegram
      {"办证 询telegram:@ts775", {{K::Telegram, "ts775"}}},
      {"代开发票 飞机@fapiao_888 秒回", {{K::Telegram, "fapiao_888"}}},
      {"出售银行卡 TG：@Ｃａｒｄ_ｓｅｌｌｅｒ", {{K::Telegram, "card_seller"}}},
      {"百家乐代理 纸飞机 @bjl​_vip99", {{K::Telegram, "bjl_vip99"}}},
      {"洗钱通道 tg:@wаsh_money1", {{K::Telegram, "wash_money1"}}},
      {"刷单兼职 telegram @shuadan★2024", {{K::Telegram, "shuadan2024"}}},
      {"Buy followers fast, telegram: @growfast77", {{K::Telegram, "growfast77"}}},
      {"黑客接单 TG @hack_team01 价格优惠", {{K::Telegram, "hack_team01"}}},
      {"假证办理 联系飞机：@jiazheng_520", {{K::Telegram, "jiazheng_520"}}},
      {"casino bonus 💰 tg @LuckySpin88", {{K::Telegram, "luckyspin88"}}},
      // WeChat
      {"办证【微:abc_888】", {{K::WeChat, "abc_888"}}},
      {"代孕咨询 加微信 surrogacy_01", {{K::WeChat, "surrogacy_01"}}},
      {"高仿包包 V信：gaofang2023", {{K::WeChat, "gaofang2023"}}},
      {"贷款秒批 薇：daikuan_kf", {{K::WeChat, "daikuan_kf"}}},
      {"游戏币出售 微信 ｇａｍｅｃｏｉｎ８８", {{K::WeChat, "gamecoin88"}}},
      {"私家侦探 微信：zhentan‍_007", {{K::WeChat, "zhentan_007"}}},
      {"气枪出售 加微 qiangzhi★66", {{K::WeChat, "qiangzhi66"}}},
      {"代写论文 微信号：lunwen_daixie", {{K::WeChat, "lunwen_daixie"}}},
      {"发票 微信 fаpiao_kf01", {{K::WeChat, "fapiao_kf01"}}},
      {"黑帽SEO 快速排名 微信: seo_master01", {{K::WeChat, "seo_master01"}}},
      // QQ
      {"加扣扣123456", {{K::QQ, "123456"}}},
      {"黑客技术 QQ:88886666", {{K::QQ, "88886666"}}},
      {"代练 ＱＱ：１２３４５６７８", {{K::QQ, "12345678"}}},
      {"手机定位 qq ➀２③4５6７", {{K::QQ, "1234567"}}},
      {"彩票 扣扣 2‍2334455", {{K::QQ, "22334455"}}},
      {"QQ 987654321 私聊", {{K::QQ, "987654321"}}},
      {"外挂出售 qq:55667788", {{K::QQ, "55667788"}}},
      {"企业qq:800123456 售后", {{K::QQ, "800123456"}}},
      {"刷钻 扣扣：31415926", {{K::QQ, "31415926"}}},
      {"代刷信誉 QQ: 2468★13579", {{K::QQ, "246813579"}}},
      // Phone
      {"办证 电话:13812345678", {{K::Phone, "13812345678"}}},
      {"贷款 手机 +8613912345678", {{K::Phone, "+8613912345678"}}},
      {"代孕 电话：１５８８８８８８８８８", {{K::Phone, "15888888888"}}},
      {"信用卡套现 电话 02012345678", {{K::Phone, "02012345678"}}},
      {"cheap pills phone: +14155550123", {{K::Phone, "+14155550123"}}},
      {"联系电话 186​1234​5678", {{K::Phone, "18612345678"}}},
      {"手机：➀➂➇00001111", {{K::Phone, "13800001111"}}},
      {"办卡 电话：139★12345678", {{K::Phone, "13912345678"}}},
      {"香港代购 手机 +85291234567", {{K::Phone, "+85291234567"}}},
      {"微商 电话13700001111 招代理", {{K::Phone, "13700001111"}}},
      // Website
      {"看a.com办证", {{K::Website, "a.com"}}},
      {"博彩 网址 ncao3。com", {{K::Website, "ncao3.com"}}},
      {"最新地址 www.bet365-cn.net 注册送彩金", {{K::Website, "www.bet365-cn.net"}}},
      {"https://Casino88.vip/register 送88", {{K::Website, "casino88.vip"}}},
      {"老虎机 ｓｌｏｔ９９.ｃｏｍ", {{K::Website, "slot99.com"}}},
      {"代开发票 fapiao点cn", {{K::Website, "fapiao.cn"}}},
      {"赌球 qiuѕai.com", {{K::Website, "qiusai.com"}}},
      {"暗网 dark​market.cc", {{K::Website, "darkmarket.cc"}}},
      {"彩票 lottery★888.com", {{K::Website, "lottery888.com"}}},
      {"点击 http://shop.fake-id.org/buy 假证", {{K::Website, "shop.fake-id.org"}}},
  };
}

Outcome contact_extraction() {
  std::size_t exact = 0, invalid = 0;
  std::vector<std::string> misses;
  const auto cases = contact_cases();
  for (const auto& c : cases) {
    const auto got = extract_contacts(c.text, models().contact_type);
    std::set<std::pair<ContactKind, std::string>> got_set, want(c.expected.begin(), c.expected.end());
    for (const auto& x : got) {
      got_set.emplace(x.kind, x.value);
      invalid += !valid_contact_value(x.kind, x.value);
    }
    if (got_set == want) {
      ++exact;
    } else {
      std::string g;
      for (const auto& [k, v] : got_set) g += std::string(to_string(k)) + ":" + v + " ";
      misses.push_back("'" + c.text + "' -> " + (g.empty() ? "nothing" : g));
    }
  }
  std::string detail = std::to_string(exact) + "/" + std::to_string(cases.size()) + " exact, " +
                       std::to_string(invalid) + " grammar-invalid";
  for (const auto& m : misses) detail += "; miss " + m;
  return {cases.size() == 50 && exact >= kContactMinExact && invalid == 0, detail};
}

// 6 -------------------------------------------------------------------------

// IPTs reachable from the seeds: a keyword reaches IPTs whose text contains
// it, a site reaches the IPTs it reflects, an IPT reaches its sites and its
// contact phrase.
std::set<std::size_t> closure(const desk::MockWorld& w, const std::string& seed_kw, std::size_t seed_site) {
  std::set<std::size_t> found, sites;
  std::set<std::string> kws;
  std::queue<std::size_t> q;
  const auto site = [&](std::size_t s) {
    if (!sites.insert(s).second) return;
    for (std::size_t i = 0; i < w.ipts.size(); ++i)
      if (std::count(w.ipts[i].sites.begin(), w.ipts[i].sites.end(), s) && found.insert(i).second) q.push(i);
  };
  const auto kw = [&](const std::string& k) {
    if (!kws.insert(k).second) return;
    for (std::size_t i = 0; i < w.ipts.size(); ++i)
      if (w.ipts[i].text.find(k) != std::string::npos && found.insert(i).second) q.push(i);
  };
  kw(seed_kw);
  site(seed_site);
  while (!q.empty()) {
    const auto i = q.front();
    q.pop();
    for (auto s : w.ipts[i].sites) site(s);
    kw(w.ipts[i].contact_phrase);
  }
  return found;
}

Outcome snowball_recovery() {
  Timer timer;
  const auto world = desk::make_world(kWorldIpts, kWorldSites, 0, 101);
  VirtualClock clock(kT0);
  MockSearchEngine engine(world.documents, clock);
  RecordStore store(scratch("snowball"));
  Hunter hunter({&engine}, engine.fetcher(), {models().binary, models().segment}, store, clock,
                {.tokens_per_interval = 5, .interval = Duration{60}});
  const auto result =
      hunter.snowball_run({world.ipts[0].contact_phrase}, {world.templates[0]}, {.max_rounds = kWorldRounds});
  std::map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < world.ipts.size(); ++i) index_of[make_ipt_record(world.ipts[i].text, kT0).id] = i;
  const auto reach = closure(world, world.ipts[0].contact_phrase, 0);
  std::size_t found = 0, outside = 0;
  for (const auto& id : result.state.known_ipt_ids) {
    const auto it = index_of.find(id);
    if (it == index_of.end() || !reach.count(it->second)) ++outside;
    else ++found;
  }
  const bool no_duplicates = engine.queries_served() == result.state.issued_queries.size();
  const double t = timer.seconds();
  return {found >= kWorldMinFound && outside == 0 && no_duplicates && result.rounds.size() <= kWorldRounds &&
              t < kWorldBudgetSeconds,
          std::to_string(found) + "/" + std::to_string(kWorldIpts) + " found in " +
              std::to_string(result.rounds.size()) + " rounds, " + std::to_string(outside) + " outside closure, " +
              std::to_string(engine.queries_served()) + " queries served for " +
              std::to_string(result.state.issued_queries.size()) + " distinct, " + fmt("%.1f s", t)};
}

// 7 -------------------------------------------------------------------------

Outcome exposure_probe_check() {
  // First poisoned rank per keyword; 0 means never poisoned.
  const std::vector<std::size_t> first_poisoned{5, 1, 9, 10, 15, 11, 20, 40, 21, 50, 80, 51, 100, 0, 0, 0, 0, 0, 0, 0};
  const std::vector<std::size_t> k_levels{10, 20, 50, 100};
  std::vector<MockDocument> docs;
  std::vector<std::string> keywords;
  for (std::size_t k = 0; k < first_poisoned.size(); ++k) {
    char name[16];
    std::snprintf(name, sizeof name, "topic%02zu", k);
    keywords.push_back(name);
    for (std::size_t r = 1; r <= 110; ++r) {
      std::string title;
      for (std::size_t t = 0; t < 2 * (120 - r); ++t) title += std::string(name) + " ";
      MockDocument d;
      if (r == first_poisoned[k]) {
        const auto ipt = std::string(name) + " 代办毕业证【微信:abc_8" + std::to_string(10 + k) + "】";
        d.url = instantiate("https://search.portal.com/all?keyword={R}", ipt);
        d.title = title + ipt;
      } else {
        d.url = "https://static" + std::to_string(k) + ".com/p/" + std::to_string(r);
        d.title = title;
      }
      docs.push_back(d);
    }
  }
  // Hand count of keywords whose first poisoned rank is within k.
  const std::map<std::size_t, std::size_t> expected{{10, 4}, {20, 7}, {50, 10}, {100, 13}};
  VirtualClock clock(kT0);
  MockSearchEngine engine(docs, clock);
  const auto report = exposure_probe(keywords, engine, k_levels, models().binary);
  bool pass = report.keywords == keywords.size() && report.rows.size() == k_levels.size();
  std::string detail;
  double previous = -1;
  for (const auto& row : report.rows) {
    const auto want = expected.at(row.k);
    const double want_percent = 100.0 * static_cast<double>(want) / static_cast<double>(keywords.size());
    pass = pass && row.poisoned_queries == want && row.poisoned_percent == want_percent &&
           row.ipt_count == want && row.poisoned_percent >= previous;
    previous = row.poisoned_percent;
    detail += "k=" + std::to_string(row.k) + " " + fmt("%.2f%%", row.poisoned_percent) + " (want " +
              fmt("%.2f%%", want_percent) + ") ";
  }
  return {pass, detail};
}

// 8 -------------------------------------------------------------------------

struct ChainTruth {
  std::string website;
  std::size_t hops;
  std::size_t fqdns;
  bool loop;
};

Outcome redirect_analysis() {
  Scenario s;
  std::vector<ChainTruth> truth;
  for (std::size_t n = 1; n <= 6; ++n) {
    // n hops; from the third hop on, every other hop stays on the same host.
    std::vector<std::string> urls;
    std::set<std::string> hosts;
    for (std::size_t i = 0; i < n; ++i) {
      const bool same_host = i >= 2 && i % 2 == 0;
      const auto host = same_host ? parse_url(urls.back()).host : "c" + std::to_string(n) + "h" + std::to_string(i) + ".test";
      urls.push_back("http://" + host + "/step" + std::to_string(i));
      hosts.insert(host);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto& next = urls[i + 1];
      switch (i % 3) {
        case 0: s.add(urls[i], redirect(next, i % 2 ? 301 : 302)); break;
        case 1: s.add(urls[i], page(R"(<meta http-equiv="refresh" content="0; url=)" + next + R"(">)")); break;
        default: s.add(urls[i], page(R"(<script>window.location.href = ")" + next + R"(";</script>)")); break;
      }
    }
    s.add(urls.back(), page("<p>landing " + std::to_string(n) + "</p>"));
    truth.push_back({urls.front(), n, hosts.size(), false});
  }
  s.add("http://loop-a.test/", redirect("http://loop-b.test/"));
  s.add("http://loop-b.test/", page(R"(<meta http-equiv="refresh" content="1;url=http://loop-a.test/">)"));
  truth.push_back({"http://loop-a.test/", 2, 2, true});

  FixtureServer server(std::make_shared<Scenario>(s), "cn");
  HttpFetchBackend backend("cn", {.connect_to = server.address()});
  std::vector<SiteSnapshot> snaps;
  std::size_t matched = 0;
  std::string detail;
  for (const auto& t : truth) {
    auto snap = snapshot_site(t.website, backend, kT0);
    const auto& c = snap.chain;
    const bool ok = c.hops.size() == t.hops && c.distinct_fqdn_count == t.fqdns && c.loop == t.loop &&
                    !c.network_error && !c.hop_cap_reached;
    matched += ok;
    detail += std::to_string(c.hops.size()) + "/" + std::to_string(c.distinct_fqdn_count) + (c.loop ? "L" : "") + " ";
    snaps.push_back(std::move(snap));
  }
  const auto rows = redirect_length_table(snaps);
  bool cumulative = !rows.empty() && rows.back().snapshots == snaps.size();
  for (std::size_t i = 1; i < rows.size(); ++i)
    cumulative = cumulative && rows[i].snapshots >= rows[i - 1].snapshots && rows[i].websites >= rows[i - 1].websites;
  for (const auto& r : rows) {
    std::size_t n = 0;
    for (const auto& sn : snaps) n += sn.chain.distinct_fqdn_count >= r.at_least;
    cumulative = cumulative && r.snapshots == n;
  }
  return {matched == truth.size() && cumulative,
          std::to_string(matched) + "/" + std::to_string(truth.size()) + " chains match (hops/fqdns: " + detail +
              "), bucket table " + (cumulative ? "cumulative" : "NOT cumulative")};
}

// 9 -------------------------------------------------------------------------

Outcome cloaking_and_vantage() {
  SplitMix64 rng(4);
  const auto gamble = desk::make_ipt(rng, CategoryLabel::Gambling, ContactKind::Telegram).text;
  Scenario s;
  s.add("http://shell.test/", page("<p>" + desk::make_benign(rng) + R"(</p><iframe src="http://frame.example/p"></iframe>)"));
  s.add("http://frame.example/p", page("<div>" + gamble + "</div>"));
  s.add("http://video.test/", page(R"(<p>our channel</p><iframe src="http://player.example/embed"></iframe>)"));
  s.add("http://player.example/embed", page("<p>" + desk::make_benign(rng) + "</p>"));
  s.add("http://self.test/", page(R"(<p>home</p><iframe src="http://cdn.self.test/w"></iframe>)"));
  s.add("http://cdn.self.test/w", page("<p>" + gamble + "</p>"));
  s.add("http://geo.test/", page("<p>welcome</p>"));
  s.add_variant("http://geo.test/", "us", redirect("http://google.com/"));
  s.add("http://google.com/", page("<p>search</p>"));
  s.add("http://stable.test/", page("<p>same for everyone</p>"));
  auto shared = std::make_shared<const Scenario>(s);
  FixtureServer cn_server(shared, "cn"), us_server(shared, "us");
  HttpFetchBackend cn("cn", {.connect_to = cn_server.address()});
  HttpFetchBackend us("us", {.connect_to = us_server.address()});
  const auto& classifier = models().categories;

  const auto cloaked = [&](const std::string& site) {
    return detect_iframe_cloaking(snapshot_site(site, cn, kT0), cn, classifier).has_value();
  };
  const auto diverges = [&](const std::string& site) {
    return compare_vantage(snapshot_site(site, cn, kT0), snapshot_site(site, us, kT0)).divergent;
  };
  const bool shell = cloaked("http://shell.test/");
  const bool video = cloaked("http://video.test/");
  const bool self = cloaked("http://self.test/");
  const bool geo = diverges("http://geo.test/");
  const bool stable = diverges("http://stable.test/");
  const auto yn = [](bool b) { return b ? "flagged" : "clear"; };
  return {shell && !video && !self && geo && !stable,
          std::string("cloaked shell ") + yn(shell) + ", benign frame " + yn(video) + ", same-site frame " + yn(self) +
              ", vantage fixture " + yn(geo) + ", stable control " + yn(stable)};
}

// 10 ------------------------------------------------------------------------

Outcome lrap_cases() {
  struct Case {
    std::vector<bool> truth;
    std::vector<double> scores;
    double expected;
  };
  const std::vector<Case> cases{
      // True labels at ranks 1 and 3 of 4: (1/1 + 2/3) / 2.
      {{true, false, true, false}, {0.9, 0.5, 0.3, 0.1}, 5.0 / 6.0},
      // One true label at rank 2 of 3.
      {{false, true, false}, {0.7, 0.4, 0.1}, 0.5},
      // True labels at ranks 2 and 4 of 4: (1/2 + 2/4) / 2.
      {{false, true, false, true}, {0.8, 0.6, 0.4, 0.2}, 0.5},
  };
  double worst = 0;
  for (const auto& c : cases) worst = std::max(worst, std::abs(lrap_sample(c.truth, c.scores) - c.expected));
  std::vector<std::vector<bool>> truth;
  std::vector<std::vector<double>> perfect;
  for (const auto& c : cases) {
    truth.push_back(c.truth);
    std::vector<double> s;
    for (bool b : c.truth) s.push_back(b ? 1.0 : 0.0);
    perfect.push_back(s);
  }
  const double p = lrap(truth, perfect);
  const double mean = lrap(truth, {cases[0].scores, cases[1].scores, cases[2].scores});
  const double mean_expected = (5.0 / 6.0 + 0.5 + 0.5) / 3.0;
  return {worst <= kLrapTolerance && std::abs(p - 1.0) <= kLrapTolerance &&
              std::abs(mean - mean_expected) <= kLrapTolerance,
          "max deviation " + fmt("%.1e", worst) + ", perfect predictor " + fmt("%.12f", p) + ", mean " +
              fmt("%.12f", mean)};
}

// 11 ------------------------------------------------------------------------

Outcome telegram_mock() {
  // Three epochs of channel posts; fetches happen after each epoch and twice
  // in the last.
  nlohmann::json msgs = nlohmann::json::array();
  std::set<std::int64_t> ids;
  std::int64_t id = 1000;
  for (int epoch = 0; epoch < 3; ++epoch)
    for (int i = 0; i < 4 + epoch; ++i) {
      id += 1 + i % 2;
      ids.insert(id);
      msgs.push_back({{"id", id},
                      {"timestamp", format_timestamp(kT0 + Duration{3600 * (id - 1000)})},
                      {"text", "post " + std::to_string(id)},
                      {"epoch", epoch}});
    }
  auto transport = FixtureTransport::from_json(
      nlohmann::json::array({{{"handle", "@Market"}, {"kind", "channel"}, {"count", 5000}, {"messages", msgs}}}));
  RecordStore store(scratch("telegram"));
  VirtualClock clock(kT0);
  RateGovernor governor({}, clock);
  std::vector<std::int64_t> fetched;
  for (int epoch = 0; epoch < 3; ++epoch) {
    transport.set_epoch(epoch);
    for (int k = 0; k < (epoch == 2 ? 2 : 1); ++k) {
      for (const auto& m : tg_fetch("market", transport, store, governor, clock).new_messages) fetched.push_back(m.id);
      clock.advance(kWeek);
    }
  }
  std::set<std::int64_t> stored;
  for (const auto& m : store.query_as<TelegramMessage>()) stored.insert(m.id);
  const bool exactly_once = std::set<std::int64_t>(fetched.begin(), fetched.end()).size() == fetched.size() &&
                            stored == ids && store.count(RecordKind::tg_message) == ids.size();

  // Fifty messages: five categories at seven each, fifteen benign.
  SplitMix64 rng(50);
  const std::vector<CategoryLabel> cats{CategoryLabel::Gambling, CategoryLabel::DrugSales, CategoryLabel::FakeCertificate,
                                        CategoryLabel::DataTheft, CategoryLabel::WeaponSales};
  std::vector<TelegramMessage> corpus;
  for (int i = 0; i < 50; ++i) {
    const auto text = i < 35 ? desk::make_ipt(rng, cats[static_cast<std::size_t>(i) % cats.size()],
                                              ContactKind::Telegram).text
                             : desk::make_benign(rng);
    corpus.push_back({"market", i, kT0, text});
  }
  // Keyword rule: a message carries every category one of whose keyword
  // phrases it contains.
  std::map<CategoryLabel, std::size_t> want;
  std::size_t want_illicit = 0;
  for (const auto& m : corpus) {
    bool any = false;
    for (auto c : illicit_categories())
      for (const auto& kw : desk::category_keywords(c))
        if (m.text.find(kw) != std::string::npos) {
          ++want[c];
          any = true;
          break;
        }
    want_illicit += any;
  }
  const auto dist = classify_messages(corpus, models().categories);
  std::map<CategoryLabel, std::size_t> got;
  for (const auto& r : dist.rows) got[r.category] = r.messages;
  const bool distribution = dist.total == corpus.size() && dist.illicit == want_illicit && got == want;
  std::string detail = std::to_string(fetched.size()) + " fetched for " + std::to_string(ids.size()) + " posted, " +
                       std::to_string(stored.size()) + " stored; classifier " + std::to_string(dist.illicit) +
                       " illicit vs keyword rule " + std::to_string(want_illicit);
  for (const auto& [c, n] : want)
    detail += ", " + std::string(to_string(c)) + " " + std::to_string(got[c]) + "/" + std::to_string(n);
  return {exactly_once && distribution, detail};
}

// 12 ------------------------------------------------------------------------

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    files[fs::relative(e.path(), root).string()] = ss.str();
  }
  return files;
}

// Runs the pipeline inside `dir` with relative paths and returns every
// report output.
std::string run_pipeline(const fs::path& dir, std::string& log) {
  const auto previous = fs::current_path();
  fs::current_path(dir);
  desk::write_demo_fixtures("fx", 7);
  const std::vector<std::string> global{"--now", "2024-03-01T00:00:00Z", "--seed", "7", "--store", "store",
                                        "--models", "models", "-q"};
  const std::vector<std::vector<std::string>> steps{
      {"train", "--trees", "31"},
      {"hunt", "--seed-keywords", "fx/seed_keywords.txt", "--seed-urs", "fx/seed_urs.txt", "--corpus",
       "fx/corpus.jsonl", "--rounds", "6", "--state", "hunt.json"},
      {"classify"},
      {"extract-contacts"},
      {"report", "--kind", "categories"},
      {"report", "--kind", "top-abused"},
      {"report", "--kind", "popularity", "--ranking", "fx/ranking.txt"},
      {"report", "--kind", "languages"},
      {"report", "--kind", "contacts"},
  };
  std::string reports;
  for (const auto& step : steps) {
    auto args = global;
    args.insert(args.end(), step.begin(), step.end());
    std::ostringstream out, err;
    const int code = cli_main(args, out, err);
    if (code != kExitOk) log += step.front() + " exited " + std::to_string(code) + ": " + err.str();
    if (step.front() != "train") reports += out.str();
  }
  fs::current_path(previous);
  return reports;
}

Outcome determinism() {
  const auto a = scratch("pipeline-a"), b = scratch("pipeline-b");
  std::string log_a, log_b;
  const auto reports_a = run_pipeline(a, log_a);
  const auto reports_b = run_pipeline(b, log_b);
  const auto store_a = read_tree(a / "store"), store_b = read_tree(b / "store");
  const auto models_a = read_tree(a / "models"), models_b = read_tree(b / "models");
  std::size_t ipts = 0;
  if (store_a.count("ipt.jsonl")) ipts = static_cast<std::size_t>(std::count(store_a.at("ipt.jsonl").begin(), store_a.at("ipt.jsonl").end(), '\n'));
  const bool same = store_a == store_b && models_a == models_b && reports_a == reports_b;
  return {log_a.empty() && log_b.empty() && same && ipts > 0 && !reports_a.empty(),
          std::to_string(store_a.size()) + " store files, " + std::to_string(ipts) + " IPT lines, " +
              std::to_string(reports_a.size()) + " report bytes, " + (same ? "byte-identical" : "DIFFERENT") +
              (log_a.empty() ? "" : "; " + log_a)};
}

}  // namespace
}  // namespace ipthunt

int main() {
  using namespace ipthunt;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"feature oracle equivalence", feature_oracle},
      {"binary classifier benchmark", binary_benchmark},
      {"reflection detection", reflection_detection},
      {"URS round trip", urs_round_trip},
      {"contact extraction", contact_extraction},
      {"snowball recovery", snowball_recovery},
      {"exposure probe", exposure_probe_check},
      {"redirect analysis", redirect_analysis},
      {"cloaking and vantage", cloaking_and_vantage},
      {"LRAP", lrap_cases},
      {"Telegram mock", telegram_mock},
      {"pipeline determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1 < 10 ? " " : "") << i + 1 << ". "
              << criteria[i].first << ": " << o.detail << std::endl;
  }
  std::error_code ec;
  fs::remove_all(fs::temp_directory_path() / ("ipthunt-acceptance-" + std::to_string(::getpid())), ec);
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
