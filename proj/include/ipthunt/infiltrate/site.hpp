#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ipthunt/core/types.hpp"
#include "ipthunt/infiltrate/fetch.hpp"
#include "ipthunt/learn/multilabel.hpp"

namespace ipthunt {

inline constexpr std::size_t kDefaultHopCap = 10;

struct ChainResult {
  RedirectChain chain;
  // Last response received; absent when the final hop failed.
  std::optional<FetchResponse> landing;
};

// Follows HTTP 3xx Location headers, then meta refresh, then static script
// redirects, one hop at a time. Stops on a terminal page, a revisited URL
// (loop), hop_cap hops, or a network error (partial chain). Throws
// MalformedUrl when `url` does not parse.
ChainResult follow_chain(const std::string& url, FetchBackend& backend, std::size_t hop_cap = kDefaultHopCap);
RedirectChain fetch_chain(const std::string& url, FetchBackend& backend, std::size_t hop_cap = kDefaultHopCap);

struct SnapshotOptions {
  std::size_t hop_cap = kDefaultHopCap;
  std::vector<int> block_statuses{401, 403, 429, 451};
  std::vector<std::string> block_patterns{"access denied", "captcha", "forbidden"};
};

// Visits `website` through `backend` and records the chain, the landing page
// digest (over whitespace-collapsed body), its iframe sources (resolved) and
// its rendered text. A block status or a block-message pattern in the landing
// text sets `blocked` and the evidence; a failed final hop sets `unreachable`.
SiteSnapshot snapshot_site(const std::string& website, FetchBackend& backend, Timestamp taken_at,
                           const SnapshotOptions& options = {});

// Snapshots distinct websites concurrently (`threads` = 0 picks the hardware
// concurrency). Output follows input order. The backend must be thread-safe.
std::vector<SiteSnapshot> snapshot_sites(const std::vector<std::string>& websites, FetchBackend& backend,
                                         Timestamp taken_at, const SnapshotOptions& options = {},
                                         std::size_t threads = 0);

struct CloakingFinding {
  std::string website;
  std::string host_apex;
  std::string iframe_url;
  std::string iframe_apex;
  std::vector<CategoryLabel> iframe_categories;
  bool operator==(const CloakingFinding&) const = default;
};

struct IframeFailure {
  std::string url;
  std::string error;
};

// Fetches each iframe source once and reports the first one that sits on a
// foreign apex domain, classifies as illicit, and is embedded in a host page
// that classifies as Benign only.
std::optional<CloakingFinding> detect_iframe_cloaking(const SiteSnapshot& snapshot, FetchBackend& backend,
                                                      const LabelClassifier& classifier,
                                                      std::vector<IframeFailure>* failures = nullptr);

inline constexpr Duration kVantageWindow{24 * 3600};

struct DivergenceReport {
  std::string website;
  std::string vantage_a;
  std::string vantage_b;
  std::string landing_apex_a;
  std::string landing_apex_b;
  bool landing_differs = false;
  bool content_differs = false;
  bool blocked_a = false;
  bool blocked_b = false;
  bool unreachable_a = false;
  bool unreachable_b = false;
  bool divergent = false;
};

// Divergent when landing apex domains differ, when both landed with 200 and
// the content digests differ, or when exactly one side was blocked or
// unreachable. Throws MissingCounterpart unless both snapshots are of the same
// website, from different vantages, taken within `window` of each other.
DivergenceReport compare_vantage(const SiteSnapshot& a, const SiteSnapshot& b, Duration window = kVantageWindow);

// Picks the closest-in-time pair of snapshots of `website` from the two
// vantages and compares them.
DivergenceReport compare_vantage(const std::vector<SiteSnapshot>& snapshots, const std::string& website,
                                 const std::string& vantage_a, const std::string& vantage_b,
                                 Duration window = kVantageWindow);

inline constexpr Duration kWeek{7 * 24 * 3600};

// Epoch index of a timestamp: whole periods since the Monday 1970-01-05.
std::int64_t epoch_of(Timestamp t, Duration period = kWeek);

struct LandingCluster {
  std::int64_t epoch = 0;
  std::string landing_fqdn;
  std::vector<std::string> websites;  // sorted
};

struct LandingClusters {
  // Ordered by epoch, then size (largest first), then landing FQDN.
  std::vector<LandingCluster> clusters;
  // Distinct landing FQDNs observed per website over all snapshots.
  std::map<std::string, std::size_t> distinct_landings;

  std::vector<LandingCluster> in_epoch(std::int64_t epoch) const;
};

// Groups websites by landing FQDN within each epoch. A website snapshotted
// more than once in an epoch is placed by its latest snapshot. Throws Error on
// an empty corpus.
LandingClusters cluster_by_landing(const std::vector<SiteSnapshot>& snapshots, Duration period = kWeek);

struct RedirectLengthRow {
  std::size_t at_least = 0;
  std::size_t snapshots = 0;
  double snapshot_percent = 0;
  std::size_t websites = 0;  // by the longest chain seen for the website
  double website_percent = 0;
};

// Cumulative counts of chains with at least k distinct FQDNs, largest k first.
std::vector<RedirectLengthRow> redirect_length_table(const std::vector<SiteSnapshot>& snapshots,
                                                     std::vector<std::size_t> thresholds = {1, 2, 3, 4, 5, 10});

}  // namespace ipthunt
