#include "ipthunt/desk/fixtures.hpp"

#include <fstream>
#include <set>

#include "ipthunt/core/errors.hpp"
#include "ipthunt/core/url.hpp"
#include "ipthunt/desk/corpus.hpp"
#include "ipthunt/reflection/public_suffix.hpp"

namespace ipthunt::desk {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StorageIoError("cannot write " + path.string());
  out << content;
}

std::string lines(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += s + "\n";
  return out;
}

ScenarioResponse page(std::string body, int status = 200) { return {status, {}, std::move(body), std::nullopt}; }
ScenarioResponse redirect(std::string to) { return {302, {}, "", std::move(to)}; }

std::string html(const std::string& body) { return "<html><body>" + body + "</body></html>"; }

}  // namespace

Scenario demo_scenario(const std::vector<std::string>& websites, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Scenario s;
  const std::string shared_landing = "https://linktr.example/ak5537";
  s.add(shared_landing, page(html("<h1>SEO promotion service</h1><p>top rankings guaranteed</p>")));
  s.add("https://google.com/", page(html("<p>search</p>")));
  s.add("https://casino-frame.example/play", page(html("<h1>online casino</h1><p>" +
                                                       make_ipt(rng, CategoryLabel::Gambling, ContactKind::Telegram).text +
                                                       "</p>")));
  for (std::size_t i = 0; i < websites.size(); ++i) {
    const auto& site = websites[i];
    const auto root = "http://" + site + "/";
    switch (i % 8) {
      case 0:
        s.add(root, page(html("<p>" + make_benign(rng) + "</p>")));
        break;
      case 1:
      case 2: {
        // Chain through hop hosts to the shared landing page.
        const std::size_t hops = 1 + rng.below(5);
        std::string from = root;
        for (std::size_t h = 0; h < hops; ++h) {
          const auto next = "http://hop" + std::to_string(h) + "-" + std::to_string(i) + ".example/go";
          switch (h % 3) {
            case 0: s.add(from, redirect(next)); break;
            case 1: s.add(from, page("<meta http-equiv=\"refresh\" content=\"0;url=" + next + "\">")); break;
            default: s.add(from, page("<script>location.replace(\"" + next + "\")</script>"));
          }
          from = next;
        }
        s.add(from, redirect(shared_landing));
        break;
      }
      case 3:
        s.add(root, page(html("<p>company news</p><iframe src=\"https://casino-frame.example/play\"></iframe>")));
        break;
      case 4:
        s.add(root, page(html("<p>" + make_benign(rng) + "</p>")));
        s.add_variant(root, "us", redirect("https://google.com/"));
        break;
      case 5:
        s.add(root, page(html("<h1>Access denied</h1>"), 403));
        break;
      case 6:
        s.add(root, redirect("http://" + site + "/loop"));
        s.add("http://" + site + "/loop", redirect(root));
        break;
      default:
        s.add_unreachable(root);
    }
  }
  return s;
}

nlohmann::json demo_telegram(const std::vector<std::string>& handles, std::uint64_t seed) {
  static const char* kinds[] = {"channel", "group", "user", "bot"};
  SplitMix64 rng(seed);
  nlohmann::json accounts = nlohmann::json::array();
  for (std::size_t i = 0; i < handles.size(); ++i) {
    nlohmann::json a{{"handle", handles[i]}, {"kind", kinds[i % 4]}, {"count", 50 + rng.below(5000)}};
    nlohmann::json msgs = nlohmann::json::array();
    std::int64_t id = 1;
    auto t = parse_timestamp("2022-01-03T00:00:00Z");
    for (int epoch = 0; epoch < 3; ++epoch) {
      for (auto n = 2 + rng.below(4); n > 0; --n) {
        id += 1 + static_cast<std::int64_t>(rng.below(3));
        t += Duration{3600 * static_cast<long>(1 + rng.below(48))};
        msgs.push_back({{"id", id}, {"timestamp", format_timestamp(t)},
                        {"text", rng.below(3) ? make_ipt(rng).text : make_benign(rng)}, {"epoch", epoch}});
      }
    }
    a["messages"] = msgs;
    accounts.push_back(a);
  }
  return accounts;
}

DemoFixtures write_demo_fixtures(const std::filesystem::path& dir, std::uint64_t seed) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw StorageIoError("cannot create " + dir.string() + ": " + ec.message());
  DemoFixtures f;
  f.dir = dir;
  f.world = make_world(60, 12, 3, seed);

  std::string corpus;
  for (const auto& d : f.world.documents) corpus += nlohmann::json(d).dump() + "\n";
  write_file(dir / "corpus.jsonl", corpus);
  write_file(dir / "seed_keywords.txt", f.world.ipts[0].contact_phrase + "\n");
  write_file(dir / "seed_urs.txt", f.world.templates[1] + "\n");

  std::set<std::string> seen_sites, seen_handles;
  for (const auto& p : f.world.ipts) {
    if (p.isolated) continue;
    if (!p.website.empty() && seen_sites.insert(p.website).second) f.websites.push_back(p.website);
    if (p.contact_kind == ContactKind::Website && seen_sites.insert(p.contact_value).second)
      f.websites.push_back(p.contact_value);
    if (p.contact_kind == ContactKind::Telegram && seen_handles.insert(p.contact_value).second)
      f.telegram_handles.push_back(p.contact_value);
  }
  write_file(dir / "scenario.json", demo_scenario(f.websites, seed).to_json().dump(2) + "\n");
  write_file(dir / "telegram.json", demo_telegram(f.telegram_handles, seed).dump(2) + "\n");

  // Popular domains with some of the abused portals mixed in.
  std::vector<std::string> ranking;
  for (std::size_t r = 1; r <= 2000; ++r) {
    const std::size_t portal = r == 40 ? 1 : r == 700 ? 5 : r == 1500 ? 8 : 0;
    if (portal) {
      ranking.push_back(apex_domain(parse_url(f.world.templates[portal]).host));
    } else {
      ranking.push_back("popular" + std::to_string(r) + ".example");
    }
  }
  write_file(dir / "ranking.txt", lines(ranking));

  std::vector<std::string> keywords;
  for (auto c : {CategoryLabel::Gambling, CategoryLabel::FakeCertificate, CategoryLabel::DataTheft})
    for (const auto& k : category_keywords(c)) {
      if (keywords.size() >= 10) break;
      keywords.push_back(k);
    }
  write_file(dir / "keywords.txt", lines(keywords));
  return f;
}

}  // namespace ipthunt::desk
