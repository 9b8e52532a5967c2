#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipthunt/core/store.hpp"
#include "ipthunt/hunter/adapter.hpp"
#include "ipthunt/hunter/rate.hpp"
#include "ipthunt/learn/tree_ensemble.hpp"

namespace ipthunt {

// Keyword variants paired with every `site:` query.
const std::vector<std::string>& site_query_variants();

struct HuntState {
  std::size_t round = 0;
  std::vector<std::string> keyword_frontier;  // FIFO
  std::vector<std::string> urs_frontier;      // URS templates, FIFO
  std::set<std::string> known_ipt_ids;
  std::set<std::string> known_urs_templates;  // templates already searched
  std::set<std::string> known_keywords;       // keywords already searched
  std::set<std::string> issued_queries;       // "<adapter id>\x1f<query>"

  nlohmann::json to_json() const;
  static HuntState from_json(const nlohmann::json& j);
  // Frontiers disjoint from the known sets and free of duplicates.
  void check_invariants() const;
};

// Keyword frontier verbatim; with site support, each frontier URS as
// `site:<prefix>` plus one query per variant. Order kept, duplicates dropped.
std::vector<std::string> build_queries(const HuntState& state, const AdapterCapabilities& caps);

struct ReflectedEntry {
  SearchResultEntry entry;
  ReflectionFinding finding;
};

struct FetchFailure {
  std::string url;
  std::string error;
};

// Entries whose URL parameters reflect into the fetched page or into the
// entry's own title and snippet. Without a fetcher only title and snippet
// are checked. Entries whose fetch fails are skipped and reported.
std::vector<ReflectedEntry> filter_reflection_entries(const std::vector<SearchResultEntry>& entries,
                                                      const PageFetcher& fetcher,
                                                      std::vector<FetchFailure>* failures = nullptr);

// Binary IPT decision for a reflected text. Throws DimensionMismatch when
// the model is not over the binary IPT features.
bool is_ipt_text(std::string_view text, const TreeEnsembleModel& binary_model);

struct HuntModels {
  const TreeEnsembleModel& binary;
  const TreeEnsembleModel& segment;
};

struct RoundSummary {
  std::size_t round = 0;
  std::size_t queries = 0;
  std::size_t entries = 0;
  std::size_t reflections = 0;
  std::size_t new_ipts = 0;
  std::size_t new_keywords = 0;
  std::size_t new_urs = 0;
  std::size_t known_ipts = 0;
  std::size_t known_urs = 0;
  std::vector<std::string> errors;
  nlohmann::json to_json() const;
};

struct SnowballLimits {
  std::size_t max_rounds = 6;
  std::size_t max_queries = std::numeric_limits<std::size_t>::max();
};

struct SnowballResult {
  HuntState state;
  std::vector<RoundSummary> rounds;
  nlohmann::json to_json() const;
};

// Drives the discovery loop over a fixed set of adapters, one rate governor
// per adapter. Search results, findings, URSes and IPTs are persisted.
class Hunter {
 public:
  Hunter(std::vector<SearchEngineAdapter*> adapters, PageFetcher fetcher, HuntModels models, RecordStore& store,
         Clock& clock, RateLimitPolicy policy = {});

  // One round: queries from the frontiers, reflection filtering, IPT
  // classification, then keyword and URS extraction into new frontiers.
  // Issues at most `query_budget` queries.
  RoundSummary hunt_round(HuntState& state,
                          std::size_t query_budget = std::numeric_limits<std::size_t>::max());

  // Rounds until the frontiers empty or a limit is reached. Throws Error when
  // both seed lists are empty.
  SnowballResult snowball_run(const std::vector<std::string>& seed_keywords,
                              const std::vector<std::string>& seed_urs, const SnowballLimits& limits);
  // Continues from a saved state.
  SnowballResult resume(HuntState state, const SnowballLimits& limits);

  const RateGovernor& governor(std::size_t adapter_index) const { return *governors_.at(adapter_index); }

 private:
  std::vector<SearchEngineAdapter*> adapters_;
  std::vector<std::unique_ptr<RateGovernor>> governors_;
  PageFetcher fetcher_;
  HuntModels models_;
  RecordStore& store_;
  Clock& clock_;
};

struct ExposureRow {
  std::size_t k = 0;
  std::size_t poisoned_queries = 0;
  double poisoned_percent = 0;
  std::size_t ipt_count = 0;
};

struct ExposureReport {
  std::size_t keywords = 0;  // keywords that were queried successfully
  std::vector<ExposureRow> rows;
  std::vector<std::string> skipped;  // "<keyword>: <error>"
  nlohmann::json to_json() const;
};

// For each keyword, the ranks of entries whose reflected title or snippet
// text classifies as IPT; row k counts keywords with such an entry within the
// top k. Percentages are over successfully queried keywords. `k_levels` must
// be strictly ascending.
ExposureReport exposure_probe(const std::vector<std::string>& keywords, SearchEngineAdapter& adapter,
                              const std::vector<std::size_t>& k_levels, const TreeEnsembleModel& binary_model);

}  // namespace ipthunt
