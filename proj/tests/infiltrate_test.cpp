#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "ipthunt/core/digest.hpp"
#include "ipthunt/core/errors.hpp"
#include "ipthunt/core/url.hpp"
#include "ipthunt/desk/corpus.hpp"
#include "ipthunt/desk/models.hpp"
#include "ipthunt/infiltrate/html.hpp"
#include "ipthunt/infiltrate/site.hpp"
#include "ipthunt/infiltrate/telegram.hpp"
#include "ipthunt/learn/dataset.hpp"

namespace ipthunt {
namespace {

namespace fs = std::filesystem;

Timestamp t0() { return parse_timestamp("2023-04-04T00:00:00Z"); }

ScenarioResponse page(std::string body, int status = 200) { return {status, {}, std::move(body), std::nullopt}; }
ScenarioResponse redirect(std::string to, int status = 302) { return {status, {}, "", std::move(to)}; }

std::shared_ptr<Scenario> share(Scenario s) { return std::make_shared<Scenario>(std::move(s)); }

std::vector<HopMechanism> mechanisms(const RedirectChain& c) {
  std::vector<HopMechanism> out;
  for (const auto& h : c.hops) out.push_back(h.mechanism);
  return out;
}

TEST(HtmlTest, RedirectPatterns) {
  EXPECT_EQ(meta_refresh_target(R"(<head><META HTTP-EQUIV="Refresh" CONTENT="0; URL=https://c.test/">)"),
            "https://c.test/");
  EXPECT_EQ(meta_refresh_target(R"(<meta content='3;url=/next' http-equiv='refresh'>)"), "/next");
  EXPECT_FALSE(meta_refresh_target(R"(<meta name="refresh" content="0; url=/x">)"));
  EXPECT_EQ(script_redirect_target(R"(<script>window.location = "https://d.test/";</script>)"), "https://d.test/");
  EXPECT_EQ(script_redirect_target(R"(<script>location.href='/a';</script>)"), "/a");
  EXPECT_EQ(script_redirect_target(R"(<script>location.replace("https://e.test/x")</script>)"), "https://e.test/x");
  EXPECT_FALSE(script_redirect_target(R"(<script>location.href = base + "/x";</script>)"));
  EXPECT_EQ(script_redirect_target(R"(<script>location.replace('/1'); window.location="/2"</script>)"), "/1");
}

TEST(HtmlTest, VisibleTextAndIframes) {
  EXPECT_EQ(visible_text("<html><head><style>p{}</style><script>var a='<b>';</script></head>"
                         "<body><p>Hello&nbsp;&amp; <b>world</b></p><!-- hidden --></body></html>"),
            "Hello & world");
  EXPECT_EQ(iframe_sources(R"(<iframe width=1 src="https://bad.test/g"></iframe><IFRAME SRC='/local'>)"),
            (std::vector<std::string>{"https://bad.test/g", "/local"}));
}

TEST(FetchChainTest, TerminalPage) {
  Scenario s;
  s.add("https://a.test/", page("<p>hi</p>"));
  ScenarioBackend b(share(s), "us");
  const auto c = fetch_chain("https://a.test/", b);
  ASSERT_EQ(c.hops.size(), 1u);
  EXPECT_EQ(c.distinct_fqdn_count, 1u);
  EXPECT_EQ(c.hops[0].mechanism, HopMechanism::initial);
  EXPECT_EQ(c.hops[0].status, 200);
  EXPECT_FALSE(c.loop);
}

TEST(FetchChainTest, ThreeHostsViaStatusAndMetaRefresh) {
  Scenario s;
  s.add("http://a.test/", redirect("http://b.test/"));
  s.add("http://b.test/", page(R"(<meta http-equiv="refresh" content="0;url=http://c.test/land">)"));
  s.add("http://c.test/land", page("landing"));
  ScenarioBackend b(share(s), "us");
  const auto c = fetch_chain("http://a.test/", b);
  ASSERT_EQ(c.hops.size(), 3u);
  EXPECT_EQ(c.distinct_fqdn_count, 3u);
  EXPECT_EQ(mechanisms(c),
            (std::vector<HopMechanism>{HopMechanism::initial, HopMechanism::http_3xx, HopMechanism::meta_refresh}));
  EXPECT_EQ(c.hops[2].url, "http://c.test/land");
}

TEST(FetchChainTest, RelativeLocationAndScriptHop) {
  Scenario s;
  s.add("http://a.test/", redirect("/step", 301));
  s.add("http://a.test/step", page(R"(<script>location.href="//z.test/end"</script>)"));
  s.add("http://z.test/end", page("end"));
  ScenarioBackend b(share(s), "us");
  const auto c = fetch_chain("http://a.test/", b);
  ASSERT_EQ(c.hops.size(), 3u);
  EXPECT_EQ(c.hops[1].url, "http://a.test/step");
  EXPECT_EQ(c.hops[2].mechanism, HopMechanism::js_location);
  EXPECT_EQ(c.distinct_fqdn_count, 2u);
}

TEST(FetchChainTest, SelfRedirectLoop) {
  Scenario s;
  s.add("http://loop.test/", redirect("http://loop.test/"));
  ScenarioBackend b(share(s), "us");
  const auto c = fetch_chain("http://loop.test/", b);
  EXPECT_TRUE(c.loop);
  EXPECT_EQ(c.hops.size(), 1u);
}

TEST(FetchChainTest, NetworkErrorGivesPartialChain) {
  Scenario s;
  s.add("http://a.test/", redirect("http://gone.test/"));
  s.add_unreachable("http://gone.test/");
  ScenarioBackend b(share(s), "us");
  const auto c = fetch_chain("http://a.test/", b);
  ASSERT_EQ(c.hops.size(), 2u);
  EXPECT_TRUE(c.network_error);
  EXPECT_EQ(c.hops[1].status, 0);
  EXPECT_THROW(fetch_chain("not a url", b), MalformedUrl);
}

// Random redirect graphs: chains stay within the cap, always terminate, and
// the distinct count matches a recount of the hop hosts.
TEST(FetchChainTest, RandomGraphProperties) {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    Scenario s;
    const std::size_t nodes = 2 + rng.below(15);
    auto url = [&](std::size_t i) { return "http://h" + std::to_string(i % 5) + ".test/p" + std::to_string(i); };
    for (std::size_t i = 0; i < nodes; ++i) {
      const auto target = url(rng.below(nodes + 1));
      switch (rng.below(4)) {
        case 0: s.add(url(i), page("end")); break;
        case 1: s.add(url(i), redirect(target)); break;
        case 2: s.add(url(i), page("<meta http-equiv=refresh content='0;url=" + target + "'>")); break;
        default: s.add(url(i), page("<script>window.location=\"" + target + "\"</script>"));
      }
    }
    ScenarioBackend b(share(s), "us");
    const std::size_t cap = 1 + rng.below(10);
    const auto c = fetch_chain(url(0), b, cap);
    EXPECT_LE(c.hops.size(), cap);
    EXPECT_GE(c.hops.size(), 1u);
    std::set<std::string> hosts;
    for (const auto& h : c.hops) hosts.insert(parse_url(h.url).host);
    EXPECT_EQ(c.distinct_fqdn_count, hosts.size());
    std::set<std::string> urls;
    for (const auto& h : c.hops) EXPECT_TRUE(urls.insert(h.url).second);
  }
}

TEST(FetchChainTest, HopCapStopsLongChains) {
  Scenario s;
  for (int i = 0; i < 15; ++i) s.add("http://n" + std::to_string(i) + ".test/", redirect("http://n" + std::to_string(i + 1) + ".test/"));
  ScenarioBackend b(share(s), "us");
  const auto c = fetch_chain("http://n0.test/", b);
  EXPECT_EQ(c.hops.size(), 10u);
  EXPECT_TRUE(c.hop_cap_reached);
  EXPECT_EQ(c.distinct_fqdn_count, 10u);
}

TEST(SnapshotTest, Examples) {
  Scenario s;
  s.add("https://plain.test/", page("<html><body>  Welcome   to our shop </body></html>"));
  s.add("https://framed.test/", page(R"(<p>news</p><iframe src="https://bad.test/g"></iframe>)"));
  s.add("https://deny.test/", page("nope", 403));
  s.add("https://captcha.test/", page("<h1>Please complete the CAPTCHA</h1>"));
  s.add_unreachable("https://down.test/");
  ScenarioBackend b(share(s), "us");

  const auto plain = snapshot_site("https://plain.test/", b, t0());
  EXPECT_EQ(plain.chain.hops.size(), 1u);
  EXPECT_TRUE(plain.iframe_sources.empty());
  EXPECT_FALSE(plain.blocked);
  EXPECT_EQ(plain.landing_fqdn, "plain.test");
  EXPECT_EQ(plain.vantage, "us");
  EXPECT_EQ(plain.content_digest, digest128("<html><body> Welcome to our shop </body></html>"));

  const auto framed = snapshot_site("https://framed.test/", b, t0());
  EXPECT_EQ(framed.iframe_sources, (std::vector<std::string>{"https://bad.test/g"}));

  const auto deny = snapshot_site("https://deny.test/", b, t0());
  EXPECT_TRUE(deny.blocked);
  EXPECT_EQ(deny.block_evidence, "status 403");

  const auto captcha = snapshot_site("https://captcha.test/", b, t0());
  EXPECT_TRUE(captcha.blocked);
  EXPECT_NE(captcha.block_evidence.find("captcha"), std::string::npos);

  const auto down = snapshot_site("https://down.test/", b, t0());
  EXPECT_TRUE(down.unreachable);
  EXPECT_FALSE(down.blocked);
}

TEST(SnapshotTest, ConcurrentBatchMatchesSequential) {
  Scenario s;
  std::vector<std::string> sites;
  for (int i = 0; i < 30; ++i) {
    const auto site = "http://s" + std::to_string(i) + ".test/";
    sites.push_back(site);
    s.add(site, i % 2 ? redirect("http://land.test/" + std::to_string(i % 3)) : page("page " + std::to_string(i)));
  }
  for (int i = 0; i < 3; ++i) s.add("http://land.test/" + std::to_string(i), page("land"));
  ScenarioBackend b(share(s), "us");
  const auto batch = snapshot_sites(sites, b, t0(), {}, 4);
  ASSERT_EQ(batch.size(), sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) EXPECT_EQ(batch[i], snapshot_site(sites[i], b, t0()));
}

class StubClassifier : public LabelClassifier {
 public:
  std::vector<CategoryLabel> classify(std::string_view text) const override {
    if (text.find("casino") != std::string_view::npos) return {CategoryLabel::Gambling};
    if (text.find("bank") != std::string_view::npos) return {CategoryLabel::FinancialFraud};
    return {CategoryLabel::Benign};
  }
};

TEST(CloakingTest, Examples) {
  Scenario s;
  s.add("http://nbjs.test/", page(R"(<p>company news and products</p><iframe src="http://slots.example/play"></iframe>)"));
  s.add("http://slots.example/play", page("<h1>online casino bonus 88</h1>"));
  s.add("http://same.test/", page(R"(<p>weather</p><iframe src="http://cdn.same.test/casino"></iframe>)"));
  s.add("http://cdn.same.test/casino", page("casino"));
  s.add("http://empty.test/", page("<p>plain</p>"));
  s.add("http://broken.test/", page(R"(<iframe src="http://gone.example/"></iframe>)"));
  s.add_unreachable("http://gone.example/");
  ScenarioBackend b(share(s), "us");
  StubClassifier stub;

  const auto found = detect_iframe_cloaking(snapshot_site("http://nbjs.test/", b, t0()), b, stub);
  ASSERT_TRUE(found);
  EXPECT_EQ(found->iframe_apex, "slots.example");
  EXPECT_EQ(found->host_apex, "nbjs.test");
  EXPECT_EQ(found->iframe_categories, (std::vector<CategoryLabel>{CategoryLabel::Gambling}));

  EXPECT_FALSE(detect_iframe_cloaking(snapshot_site("http://same.test/", b, t0()), b, stub));
  EXPECT_FALSE(detect_iframe_cloaking(snapshot_site("http://empty.test/", b, t0()), b, stub));
  std::vector<IframeFailure> failures;
  EXPECT_FALSE(detect_iframe_cloaking(snapshot_site("http://broken.test/", b, t0()), b, stub, &failures));
  ASSERT_EQ(failures.size(), 1u);
  EXPECT_EQ(failures[0].url, "http://gone.example/");
}

TEST(CloakingTest, TrainedCategoryModelFlagsGamblingFrame) {
  SplitMix64 rng(3);
  const auto gamble = desk::make_ipt(rng, CategoryLabel::Gambling, ContactKind::Telegram).text;
  Scenario s;
  s.add("http://shell.test/", page("<p>" + desk::make_benign(rng) + R"(</p><iframe src="http://g.example/x"></iframe>)"));
  s.add("http://g.example/x", page("<div>" + gamble + "</div>"));
  ScenarioBackend b(share(s), "us");
  const auto& model = desk::default_models().categories;
  const auto found = detect_iframe_cloaking(snapshot_site("http://shell.test/", b, t0()), b, model);
  ASSERT_TRUE(found);
  EXPECT_NE(std::find(found->iframe_categories.begin(), found->iframe_categories.end(), CategoryLabel::Gambling),
            found->iframe_categories.end());
}

TEST(VantageTest, Examples) {
  Scenario s;
  s.add("https://kkh.test/", page("<p>same</p>"));
  s.add_variant("https://kkh.test/", "us", redirect("https://google.com/"));
  s.add_variant("https://kkh.test/", "cn", page(R"(<a href="https://x1.example/">1</a><a href="https://x2.example/">2</a>)"));
  s.add("https://google.com/", page("search"));
  s.add("https://stable.test/", page("<p>same</p>"));
  s.add("https://geo.test/", page("<p>same</p>"));
  s.add_variant("https://geo.test/", "us", page("denied", 451));
  auto shared = share(s);
  ScenarioBackend us(shared, "us"), cn(shared, "cn");

  const auto same = compare_vantage(snapshot_site("https://stable.test/", us, t0()),
                                    snapshot_site("https://stable.test/", cn, t0() + Duration{3600}));
  EXPECT_FALSE(same.divergent);

  const auto kkh = compare_vantage(snapshot_site("https://kkh.test/", us, t0()), snapshot_site("https://kkh.test/", cn, t0()));
  EXPECT_TRUE(kkh.divergent);
  EXPECT_TRUE(kkh.landing_differs);
  EXPECT_EQ(kkh.landing_apex_a, "google.com");
  EXPECT_EQ(kkh.landing_apex_b, "kkh.test");

  const auto geo = compare_vantage(snapshot_site("https://geo.test/", us, t0()), snapshot_site("https://geo.test/", cn, t0()));
  EXPECT_TRUE(geo.divergent);
  EXPECT_TRUE(geo.blocked_a);
  EXPECT_FALSE(geo.blocked_b);

  EXPECT_THROW(compare_vantage(snapshot_site("https://stable.test/", us, t0()),
                               snapshot_site("https://stable.test/", cn, t0() + Duration{25 * 3600})),
               MissingCounterpart);
  const std::vector<SiteSnapshot> corpus{snapshot_site("https://stable.test/", us, t0())};
  EXPECT_THROW(compare_vantage(corpus, "https://stable.test/", "us", "cn"), MissingCounterpart);
}

TEST(ClusterTest, EightyEightSitesShareOneLanding) {
  Scenario s;
  std::vector<std::string> sites;
  for (int i = 0; i < 88; ++i) {
    sites.push_back("http://seo" + std::to_string(i) + ".test/");
    s.add(sites.back(), redirect("https://linktr.example/ak"));
  }
  for (int i = 0; i < 5; ++i) {
    sites.push_back("http://solo" + std::to_string(i) + ".test/");
    s.add(sites.back(), page("own"));
  }
  s.add("https://linktr.example/ak", page("seo service"));
  ScenarioBackend b(share(s), "us");
  const auto clusters = cluster_by_landing(snapshot_sites(sites, b, t0()));
  ASSERT_EQ(clusters.clusters.size(), 6u);
  EXPECT_EQ(clusters.clusters[0].landing_fqdn, "linktr.example");
  EXPECT_EQ(clusters.clusters[0].websites.size(), 88u);
  for (std::size_t i = 1; i < clusters.clusters.size(); ++i) EXPECT_EQ(clusters.clusters[i].websites.size(), 1u);
  EXPECT_THROW(cluster_by_landing({}), Error);
}

TEST(ClusterTest, DistinctLandingsOverEpochs) {
  auto snap = [](std::string site, std::string landing, Timestamp at) {
    SiteSnapshot s;
    s.website = std::move(site);
    s.taken_at = at;
    s.vantage = "us";
    s.chain.hops.push_back({s.website, "w.test", HopMechanism::initial, 302});
    s.chain.hops.push_back({"http://" + landing + "/", landing, HopMechanism::http_3xx, 200});
    s.chain.distinct_fqdn_count = 2;
    s.landing_fqdn = landing;
    return s;
  };
  const std::vector<SiteSnapshot> series{snap("http://w.test/", "x.test", t0()),
                                         snap("http://w.test/", "x.test", t0() + kWeek),
                                         snap("http://w.test/", "y.test", t0() + 2 * kWeek),
                                         snap("http://v.test/", "x.test", t0())};
  const auto c = cluster_by_landing(series);
  EXPECT_EQ(c.distinct_landings.at("http://w.test/"), 2u);
  EXPECT_EQ(c.distinct_landings.at("http://v.test/"), 1u);
  const auto first = c.in_epoch(epoch_of(t0()));
  ASSERT_EQ(first.size(), 1u);
  EXPECT_EQ(first[0].websites.size(), 2u);
  EXPECT_EQ(c.in_epoch(epoch_of(t0() + 2 * kWeek))[0].landing_fqdn, "y.test");
  EXPECT_EQ(epoch_of(parse_timestamp("1970-01-05T00:00:00Z")), 0);
  EXPECT_EQ(epoch_of(parse_timestamp("1970-01-11T23:59:59Z")), 0);
  EXPECT_EQ(epoch_of(parse_timestamp("1970-01-12T00:00:00Z")), 1);
}

TEST(ClusterTest, PartitionProperty) {
  SplitMix64 rng(9);
  std::vector<SiteSnapshot> corpus;
  for (int i = 0; i < 300; ++i) {
    SiteSnapshot s;
    s.website = "http://w" + std::to_string(rng.below(40)) + ".test/";
    s.taken_at = t0() + Duration{static_cast<long>(rng.below(5 * 7 * 24 * 3600))};
    s.landing_fqdn = "l" + std::to_string(rng.below(6)) + ".test";
    s.vantage = rng.below(2) ? "us" : "cn";
    corpus.push_back(s);
  }
  const auto c = cluster_by_landing(corpus);
  std::map<std::int64_t, std::set<std::string>> expected, seen;
  for (const auto& s : corpus) expected[epoch_of(s.taken_at)].insert(s.website);
  for (const auto& cl : c.clusters)
    for (const auto& w : cl.websites) EXPECT_TRUE(seen[cl.epoch].insert(w).second);
  EXPECT_EQ(seen, expected);
}

TEST(RedirectLengthTest, CumulativeAndMonotone) {
  SplitMix64 rng(12);
  std::vector<SiteSnapshot> corpus;
  for (int i = 0; i < 500; ++i) {
    SiteSnapshot s;
    s.website = "http://w" + std::to_string(rng.below(100)) + ".test/";
    s.chain.distinct_fqdn_count = 1 + rng.below(rng.below(2) ? 3 : 12);
    corpus.push_back(s);
  }
  const auto rows = redirect_length_table(corpus);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows.front().at_least, 10u);
  EXPECT_EQ(rows.back().at_least, 1u);
  EXPECT_EQ(rows.back().snapshots, corpus.size());
  EXPECT_DOUBLE_EQ(rows.back().snapshot_percent, 100.0);
  EXPECT_DOUBLE_EQ(rows.back().website_percent, 100.0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].snapshots, rows[i - 1].snapshots);
    EXPECT_GE(rows[i].websites, rows[i - 1].websites);
  }
  for (const auto& r : rows) {
    std::size_t n = 0;
    for (const auto& s : corpus) n += s.chain.distinct_fqdn_count >= r.at_least;
    EXPECT_EQ(r.snapshots, n);
  }
}

nlohmann::json channel_fixture(std::size_t initial, std::size_t later, std::string kind = "channel") {
  nlohmann::json msgs = nlohmann::json::array();
  for (std::size_t i = 1; i <= initial + later; ++i)
    msgs.push_back({{"id", i * 10},
                    {"timestamp", format_timestamp(parse_timestamp("2022-01-01T00:00:00Z") + Duration{3600 * static_cast<long>(i)})},
                    {"text", "post " + std::to_string(i)},
                    {"epoch", i <= initial ? 0 : 1}});
  return {{"handle", "@Deals"}, {"kind", kind}, {"count", 1200}, {"messages", msgs}};
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ipthunt_infiltrate_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(TelegramTest, ChannelFetchIsIncremental) {
  auto transport = FixtureTransport::from_json(nlohmann::json::array({channel_fixture(5, 2)}));
  RecordStore store(fresh_dir("tg"));
  VirtualClock clock(t0());
  RateGovernor governor({}, clock);
  const auto first = tg_fetch("deals", transport, store, governor, clock);
  EXPECT_EQ(first.profile.kind, TelegramKind::channel);
  EXPECT_EQ(first.profile.subscriber_or_member_count, 1200);
  EXPECT_EQ(first.new_messages.size(), 5u);
  EXPECT_EQ(store.count(RecordKind::tg_message), 5u);
  EXPECT_EQ(transport.joined(), (std::vector<std::string>{"deals"}));

  transport.set_epoch(1);
  clock.advance(kWeek);
  const auto second = tg_fetch("@DEALS", transport, store, governor, clock);
  ASSERT_EQ(second.new_messages.size(), 2u);
  EXPECT_EQ(second.new_messages[0].id, 60);
  EXPECT_EQ(store.count(RecordKind::tg_message), 7u);
  EXPECT_EQ(store.count(RecordKind::tg_profile), 2u);
  EXPECT_EQ(tg_fetch("deals", transport, store, governor, clock).new_messages.size(), 0u);
  EXPECT_EQ(transport.joined().size(), 1u);
}

TEST(TelegramTest, UserAccountsGetProfileOnly) {
  auto j = channel_fixture(3, 0, "user");
  j["count"] = nullptr;
  auto transport = FixtureTransport::from_json(nlohmann::json::array({j}));
  RecordStore store(fresh_dir("user"));
  VirtualClock clock(t0());
  RateGovernor governor({}, clock);
  const auto r = tg_fetch("deals", transport, store, governor, clock);
  EXPECT_EQ(r.profile.kind, TelegramKind::user);
  EXPECT_FALSE(r.profile.subscriber_or_member_count);
  EXPECT_TRUE(r.new_messages.empty());
  EXPECT_EQ(store.count(RecordKind::tg_message), 0u);
  EXPECT_EQ(transport.calls(), 1u);
  EXPECT_THROW(tg_fetch("nobody", transport, store, governor, clock), UnknownHandle);
}

TEST(TelegramTest, RateLimitBacksOffAndRetries) {
  auto transport = FixtureTransport::from_json(nlohmann::json::array({channel_fixture(4, 0)}));
  RecordStore store(fresh_dir("rl"));
  VirtualClock clock(t0());
  RateGovernor governor({.backoff_on_limit = Duration{30}, .max_retries = 3}, clock);
  transport.fail_next(2);
  const auto r = tg_fetch("deals", transport, store, governor, clock);
  EXPECT_EQ(r.new_messages.size(), 4u);
  EXPECT_EQ(governor.limited(), 2u);
  EXPECT_GE(clock.now(), t0() + Duration{60});
}

// Messages (ids growing with time) arrive over several epochs and are fetched at random moments; the
// union of batches is the fixture set, with no id twice.
TEST(TelegramTest, ExactlyOnceAcrossRandomSchedules) {
  SplitMix64 rng(30);
  for (int trial = 0; trial < 20; ++trial) {
    nlohmann::json msgs = nlohmann::json::array();
    const std::size_t n = 1 + rng.below(40);
    std::int64_t id = 100;
    std::size_t epoch = 0;
    for (std::size_t i = 0; i < n; ++i) {
      id += 1 + rng.below(3);
      if (rng.below(4) == 0) epoch = std::min<std::size_t>(epoch + 1, 5);
      msgs.push_back({{"id", id}, {"timestamp", "2022-06-01T00:00:00Z"}, {"text", "m"}, {"epoch", epoch}});
    }
    std::set<std::int64_t> ids;
    for (const auto& m : msgs) ids.insert(m["id"].get<std::int64_t>());
    auto transport = FixtureTransport::from_json(
        nlohmann::json::array({{{"handle", "g"}, {"kind", "group"}, {"messages", msgs}}}));
    RecordStore store(fresh_dir("eo" + std::to_string(trial)));
    VirtualClock clock(t0());
    RateGovernor governor({}, clock);
    std::vector<std::int64_t> got;
    for (int epoch = 0; epoch <= 6; ++epoch) {
      transport.set_epoch(epoch);
      for (auto k = rng.below(3); k > 0; --k)
        for (const auto& m : tg_fetch("g", transport, store, governor, clock).new_messages) got.push_back(m.id);
    }
    for (const auto& m : tg_fetch("g", transport, store, governor, clock).new_messages) got.push_back(m.id);
    std::set<std::int64_t> unique(got.begin(), got.end());
    EXPECT_EQ(unique.size(), got.size());
    EXPECT_EQ(unique, ids);
    EXPECT_EQ(store.count(RecordKind::tg_message), got.size());
  }
}

TEST(MessageDistributionTest, Examples) {
  StubClassifier stub;
  std::vector<TelegramMessage> benign(5, TelegramMessage{"c", 1, t0(), "hello"});
  const auto none = classify_messages(benign, stub);
  EXPECT_EQ(none.total, 5u);
  EXPECT_EQ(none.illicit, 0u);
  EXPECT_TRUE(none.rows.empty());

  std::vector<TelegramMessage> ten;
  for (int i = 0; i < 10; ++i) ten.push_back({"c", i, t0(), i < 4 ? "casino night" : "hello"});
  const auto d = classify_messages(ten, stub);
  ASSERT_EQ(d.rows.size(), 1u);
  EXPECT_EQ(d.rows[0].category, CategoryLabel::Gambling);
  EXPECT_DOUBLE_EQ(d.rows[0].percent_of_illicit, 100.0);
  EXPECT_DOUBLE_EQ(d.rows[0].percent_of_total, 40.0);
}

TEST(MessageDistributionTest, SharesSumToHundred) {
  SplitMix64 rng(5);
  std::vector<TelegramMessage> msgs;
  for (int i = 0; i < 60; ++i) msgs.push_back({"c", i, t0(), desk::make_ipt(rng).text});
  const auto d = classify_messages(msgs, desk::default_models().categories);
  double sum = 0;
  for (const auto& r : d.rows) sum += r.percent_of_illicit;
  EXPECT_NEAR(sum, 100.0, 1e-9);
  EXPECT_GT(d.illicit, 50u);
}

TEST(MessageDistributionTest, TrainedModelMatchesKeywordOracle) {
  SplitMix64 rng(11);
  std::vector<TelegramMessage> msgs;
  for (int i = 0; i < 10; ++i)
    msgs.push_back({"c", i, t0(),
                    i < 4 ? desk::make_ipt(rng, CategoryLabel::Gambling, ContactKind::Telegram).text : desk::make_benign(rng)});
  const auto d = classify_messages(msgs, desk::default_models().categories);
  EXPECT_EQ(d.illicit, 4u);
  ASSERT_FALSE(d.rows.empty());
  EXPECT_EQ(d.rows[0].category, CategoryLabel::Gambling);
  EXPECT_DOUBLE_EQ(d.rows[0].percent_of_total, 40.0);
}

TEST(FixtureServerTest, HttpBackendSeesVantageSpecificRoutes) {
  Scenario s;
  s.add("https://kkh.test/", page("<p>default</p>"));
  s.add_variant("https://kkh.test/", "us", redirect("https://google.com/"));
  s.add("https://google.com/", page("search"));
  auto shared = share(s);
  FixtureServer us_server(shared, "us"), cn_server(shared, "cn");
  HttpFetchBackend us("us", {.connect_to = us_server.address()});
  HttpFetchBackend cn("cn", {.connect_to = cn_server.address()});
  const auto a = snapshot_site("https://kkh.test/", us, t0());
  const auto b = snapshot_site("https://kkh.test/", cn, t0());
  ASSERT_EQ(a.chain.hops.size(), 2u);
  EXPECT_EQ(a.landing_fqdn, "google.com");
  EXPECT_EQ(b.chain.hops.size(), 1u);
  EXPECT_EQ(b.landing_text, "default");
  EXPECT_TRUE(compare_vantage(a, b).divergent);
  ScenarioBackend direct(shared, "cn");
  EXPECT_EQ(snapshot_site("https://kkh.test/", direct, t0()), b);
}

TEST(FixtureServerTest, ScenarioJsonRoundTrip) {
  const auto j = nlohmann::json::parse(R"({
    "routes": {"https://a.test/": {"status": 302, "redirect": "https://b.test/", "vantages": {"cn": {"body": "x"}}},
               "https://b.test/": {"body": "<p>b</p>"}},
    "unreachable": ["https://c.test/"]})");
  const auto s = Scenario::from_json(j);
  EXPECT_EQ(s.size(), 2u);
  const auto again = Scenario::from_json(s.to_json());
  EXPECT_EQ(again.to_json(), s.to_json());
  EXPECT_TRUE(again.unreachable("http://c.test/"));
  EXPECT_EQ(again.find("https://a.test/")->for_vantage("cn").status, 200);
  EXPECT_EQ(again.find("https://a.test/")->for_vantage("us").redirect, "https://b.test/");
}

}  // namespace
}  // namespace ipthunt
