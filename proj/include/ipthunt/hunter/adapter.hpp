#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ipthunt/core/time.hpp"
#include "ipthunt/core/types.hpp"
#include "ipthunt/reflection/reflection.hpp"

namespace ipthunt {

struct AdapterCapabilities {
  bool supports_site_filter = true;
  std::size_t max_results_per_query = 100;
};

// Search engine contract. query() returns at most max_results_per_query
// entries ranked from 1 and may throw RateLimited or NetworkError.
class SearchEngineAdapter {
 public:
  virtual ~SearchEngineAdapter() = default;
  virtual std::string id() const = 0;
  virtual AdapterCapabilities capabilities() const = 0;
  virtual std::vector<SearchResultEntry> query(const std::string& q) = 0;
};

// Location-tagged page text for a URL; throws on fetch failure.
using PageFetcher = std::function<PageText(const std::string& url)>;

struct MockDocument {
  std::string url;
  std::string title;
  std::string snippet;
  PageText body_text_by_location;
  std::vector<std::string> index_terms;
};

void to_json(nlohmann::json& j, const MockDocument& d);
void from_json(const nlohmann::json& j, MockDocument& d);

// Splits "site:<prefix> <keyword>" into its parts; either may be empty.
struct ParsedQuery {
  std::string site_prefix;
  std::string keyword;
};
ParsedQuery parse_query(std::string_view q);

// In-memory engine over a fixed corpus. A query selects documents whose URL
// (scheme removed) starts with the site prefix and whose indexed text
// (title, snippet, page text, index terms) contains the keyword, ranked by
// keyword frequency and then corpus position.
class MockSearchEngine final : public SearchEngineAdapter {
 public:
  struct Quota {
    std::size_t queries;
    Duration interval;
  };

  MockSearchEngine(std::vector<MockDocument> corpus, const Clock& clock, AdapterCapabilities caps = {},
                   std::string id = "mock");
  static std::vector<MockDocument> load_corpus(const std::string& jsonl_path);

  std::string id() const override { return id_; }
  AdapterCapabilities capabilities() const override { return caps_; }
  std::vector<SearchResultEntry> query(const std::string& q) override;

  // Answers with RateLimited once more than `quota.queries` arrive within
  // one interval.
  void set_quota(std::optional<Quota> quota) { quota_ = quota; }
  std::size_t queries_served() const { return served_; }

  // Page text of a corpus URL; throws NetworkError for unknown URLs.
  PageText page(const std::string& url) const;
  PageFetcher fetcher() const;
  const std::vector<MockDocument>& corpus() const { return corpus_; }

 private:
  std::vector<MockDocument> corpus_;
  std::vector<std::u32string> indexed_;
  const Clock& clock_;
  AdapterCapabilities caps_;
  std::string id_;
  std::optional<Quota> quota_;
  std::deque<Timestamp> recent_;
  std::size_t served_ = 0;
};

// Adapter for an HTTP search gateway: GET <base>/search?q=..&n=.. returning
// {"results": [{"url", "title", "snippet"}]}. Disabled adapters refuse to
// query, so live engines are only contacted when configured explicitly.
class HttpSearchAdapter final : public SearchEngineAdapter {
 public:
  HttpSearchAdapter(std::string base_url, Engine engine, const Clock& clock, AdapterCapabilities caps = {},
                    bool enabled = false);
  std::string id() const override;
  AdapterCapabilities capabilities() const override { return caps_; }
  std::vector<SearchResultEntry> query(const std::string& q) override;

 private:
  std::string base_url_;
  Engine engine_;
  const Clock& clock_;
  AdapterCapabilities caps_;
  bool enabled_;
};

}  // namespace ipthunt
