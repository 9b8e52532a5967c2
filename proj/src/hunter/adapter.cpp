#include "ipthunt/hunter/adapter.hpp"

#include <fstream>

#include <httplib.h>

#include "ipthunt/core/errors.hpp"
#include "ipthunt/core/text.hpp"
#include "ipthunt/core/url.hpp"

namespace ipthunt {

namespace {

std::string strip_scheme(std::string_view url) {
  for (std::string_view s : {"https://", "http://"})
    if (url.size() >= s.size() && ascii_lower(url.substr(0, s.size())) == s) return std::string(url.substr(s.size()));
  return std::string(url);
}

std::size_t occurrences(std::u32string_view hay, std::u32string_view needle) {
  if (needle.empty()) return 0;
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::u32string_view::npos; pos = hay.find(needle, pos + needle.size())) ++n;
  return n;
}

}  // namespace

void to_json(nlohmann::json& j, const MockDocument& d) {
  nlohmann::json body = nlohmann::json::object();
  for (const auto& [loc, text] : d.body_text_by_location) body[std::string(to_string(loc))] = text;
  j = {{"url", d.url},
       {"title", d.title},
       {"snippet", d.snippet},
       {"body_text_by_location", body},
       {"index_terms", d.index_terms}};
}

void from_json(const nlohmann::json& j, MockDocument& d) {
  d.url = j.at("url").get<std::string>();
  d.title = j.value("title", "");
  d.snippet = j.value("snippet", "");
  d.body_text_by_location.clear();
  if (j.contains("body_text_by_location"))
    for (const auto& [k, v] : j.at("body_text_by_location").items())
      d.body_text_by_location[location_from_string(k)] = v.get<std::string>();
  d.index_terms = j.value("index_terms", std::vector<std::string>{});
}

ParsedQuery parse_query(std::string_view q) {
  ParsedQuery p;
  const auto trimmed = collapse_whitespace(q);
  std::string_view rest(trimmed);
  if (rest.rfind("site:", 0) == 0) {
    const auto space = rest.find(' ');
    p.site_prefix = std::string(rest.substr(5, space == std::string_view::npos ? std::string_view::npos : space - 5));
    rest = space == std::string_view::npos ? std::string_view{} : rest.substr(space + 1);
  }
  p.keyword = std::string(rest);
  return p;
}

MockSearchEngine::MockSearchEngine(std::vector<MockDocument> corpus, const Clock& clock, AdapterCapabilities caps,
                                   std::string id)
    : corpus_(std::move(corpus)), clock_(clock), caps_(caps), id_(std::move(id)) {
  for (const auto& d : corpus_) {
    std::string text = d.title + "\n" + d.snippet;
    for (const auto& [_, t] : d.body_text_by_location) text += "\n" + t;
    for (const auto& t : d.index_terms) text += "\n" + t;
    indexed_.push_back(simple_lower(to_u32(text)));
  }
}

std::vector<MockDocument> MockSearchEngine::load_corpus(const std::string& jsonl_path) {
  std::ifstream in(jsonl_path, std::ios::binary);
  if (!in) throw StorageIoError("cannot read corpus " + jsonl_path);
  std::vector<MockDocument> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(nlohmann::json::parse(line).get<MockDocument>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(jsonl_path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::vector<SearchResultEntry> MockSearchEngine::query(const std::string& q) {
  const auto now = clock_.now();
  if (quota_) {
    while (!recent_.empty() && recent_.front() + quota_->interval <= now) recent_.pop_front();
    if (recent_.size() >= quota_->queries) throw RateLimited(id_ + ": too many queries");
    recent_.push_back(now);
  }
  ++served_;
  const auto parsed = parse_query(q);
  if (parsed.site_prefix.empty() && parsed.keyword.empty()) return {};
  if (!parsed.site_prefix.empty() && !caps_.supports_site_filter) throw Error(id_ + " has no site: filter");
  const auto needle = simple_lower(to_u32(parsed.keyword));
  const auto prefix = ascii_lower(parsed.site_prefix);

  struct Hit {
    std::size_t tf;
    std::size_t index;
  };
  std::vector<Hit> hits;
  for (std::size_t i = 0; i < corpus_.size(); ++i) {
    if (!prefix.empty()) {
      const auto bare = strip_scheme(corpus_[i].url);
      if (ascii_lower(bare.substr(0, prefix.size())) != prefix) continue;
    }
    const std::size_t tf = needle.empty() ? 0 : occurrences(indexed_[i], needle);
    if (!needle.empty() && tf == 0) continue;
    hits.push_back({tf, i});
  }
  std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.tf > b.tf; });
  std::vector<SearchResultEntry> out;
  for (const auto& h : hits) {
    if (out.size() >= caps_.max_results_per_query) break;
    const auto& d = corpus_[h.index];
    SearchResultEntry e;
    e.engine = Engine::mock;
    e.query = q;
    e.rank = out.size() + 1;
    e.url = d.url;
    e.title = d.title;
    e.snippet = d.snippet;
    e.fetched_at = now;
    out.push_back(std::move(e));
  }
  return out;
}

PageText MockSearchEngine::page(const std::string& url) const {
  for (const auto& d : corpus_) {
    if (d.url != url) continue;
    PageText p = d.body_text_by_location;
    p.try_emplace(ReflectionLocation::title, d.title);
    return p;
  }
  throw NetworkError("no page at " + url);
}

PageFetcher MockSearchEngine::fetcher() const {
  return [this](const std::string& url) { return page(url); };
}

HttpSearchAdapter::HttpSearchAdapter(std::string base_url, Engine engine, const Clock& clock,
                                     AdapterCapabilities caps, bool enabled)
    : base_url_(std::move(base_url)), engine_(engine), clock_(clock), caps_(caps), enabled_(enabled) {}

std::string HttpSearchAdapter::id() const { return std::string(to_string(engine_)) + "@" + base_url_; }

std::vector<SearchResultEntry> HttpSearchAdapter::query(const std::string& q) {
  if (!enabled_) throw Error(id() + " is disabled; enable it in the run configuration");
  const auto base = parse_url(base_url_);
  httplib::Client client(base.scheme + "://" + base.host + (base.port ? ":" + std::to_string(*base.port) : ""));
  client.set_connection_timeout(10);
  client.set_read_timeout(20);
  std::string path = base.path;
  if (path.empty() || path.back() != '/') path += '/';
  path += "search?q=" + percent_encode(q) + "&n=" + std::to_string(caps_.max_results_per_query);
  const auto res = client.Get(path);
  if (!res) throw NetworkError(id() + ": " + httplib::to_string(res.error()));
  if (res->status == 429) throw RateLimited(id() + ": HTTP 429");
  if (res->status != 200) throw NetworkError(id() + ": HTTP " + std::to_string(res->status));
  std::vector<SearchResultEntry> out;
  try {
    const auto body = nlohmann::json::parse(res->body);
    for (const auto& r : body.at("results")) {
      if (out.size() >= caps_.max_results_per_query) break;
      SearchResultEntry e;
      e.engine = engine_;
      e.query = q;
      e.rank = out.size() + 1;
      e.url = r.at("url").get<std::string>();
      e.title = r.value("title", "");
      e.snippet = r.value("snippet", "");
      e.fetched_at = clock_.now();
      out.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw NetworkError(id() + ": bad response: " + e.what());
  }
  return out;
}

}  // namespace ipthunt
