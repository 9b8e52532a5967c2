#include "ipthunt/hunter/hunt.hpp"

#include <algorithm>

#include "ipthunt/core/errors.hpp"
#include "ipthunt/core/text.hpp"
#include "ipthunt/extract/segment.hpp"
#include "ipthunt/textfeat/features.hpp"

namespace ipthunt {

namespace {

template <typename T>
bool contains(const std::vector<T>& v, const T& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

std::string site_token(const UrlReflectionScheme& urs) {
  auto prefix = urs_prefix(urs);
  for (std::string_view s : {"https://", "http://"})
    if (prefix.rfind(s, 0) == 0) return prefix.substr(s.size());
  return prefix;
}

std::string query_key(const std::string& adapter, const std::string& q) { return adapter + "\x1f" + q; }

}  // namespace

const std::vector<std::string>& site_query_variants() {
  static const std::vector<std::string> v{"url", "tg", "telegram", "微", "薇", "扣", "qq", "飞机"};
  return v;
}

nlohmann::json HuntState::to_json() const {
  return {{"round", round},
          {"keyword_frontier", keyword_frontier},
          {"urs_frontier", urs_frontier},
          {"known_ipt_ids", known_ipt_ids},
          {"known_urs_templates", known_urs_templates},
          {"known_keywords", known_keywords},
          {"issued_queries", issued_queries}};
}

HuntState HuntState::from_json(const nlohmann::json& j) {
  HuntState s;
  s.round = j.at("round").get<std::size_t>();
  s.keyword_frontier = j.at("keyword_frontier").get<std::vector<std::string>>();
  s.urs_frontier = j.at("urs_frontier").get<std::vector<std::string>>();
  s.known_ipt_ids = j.at("known_ipt_ids").get<std::set<std::string>>();
  s.known_urs_templates = j.at("known_urs_templates").get<std::set<std::string>>();
  s.known_keywords = j.at("known_keywords").get<std::set<std::string>>();
  s.issued_queries = j.value("issued_queries", std::set<std::string>{});
  s.check_invariants();
  return s;
}

void HuntState::check_invariants() const {
  std::set<std::string> seen;
  for (const auto& k : keyword_frontier) {
    if (known_keywords.count(k)) throw InvariantViolation("keyword frontier disjoint from known keywords");
    if (!seen.insert(k).second) throw InvariantViolation("keyword frontier has no duplicates");
  }
  seen.clear();
  for (const auto& u : urs_frontier) {
    if (known_urs_templates.count(u)) throw InvariantViolation("URS frontier disjoint from known URS templates");
    if (!seen.insert(u).second) throw InvariantViolation("URS frontier has no duplicates");
  }
}

std::vector<std::string> build_queries(const HuntState& state, const AdapterCapabilities& caps) {
  std::vector<std::string> out;
  auto add = [&out](std::string q) {
    if (!q.empty() && !contains(out, q)) out.push_back(std::move(q));
  };
  for (const auto& k : state.keyword_frontier) add(k);
  if (caps.supports_site_filter) {
    for (const auto& t : state.urs_frontier) {
      const auto site = "site:" + site_token(urs_from_template(t));
      add(site);
      for (const auto& v : site_query_variants()) add(site + " " + v);
    }
  }
  return out;
}

std::vector<ReflectedEntry> filter_reflection_entries(const std::vector<SearchResultEntry>& entries,
                                                      const PageFetcher& fetcher,
                                                      std::vector<FetchFailure>* failures) {
  std::vector<ReflectedEntry> out;
  for (const auto& e : entries) {
    PageText page;
    if (fetcher) {
      try {
        page = fetcher(e.url);
      } catch (const Error& err) {
        if (failures) failures->push_back({e.url, err.what()});
        continue;
      }
    }
    auto& title = page[ReflectionLocation::title];
    if (title.find(e.title) == std::string::npos) title += (title.empty() ? "" : "\n") + e.title;
    auto& snippet = page[ReflectionLocation::snippet];
    if (snippet.find(e.snippet) == std::string::npos) snippet += (snippet.empty() ? "" : "\n") + e.snippet;
    std::optional<ReflectionFinding> finding;
    try {
      finding = detect_reflection(e, page);
    } catch (const MalformedUrl& err) {
      if (failures) failures->push_back({e.url, err.what()});
      continue;
    }
    if (finding) out.push_back({e, std::move(*finding)});
  }
  return out;
}

bool is_ipt_text(std::string_view text, const TreeEnsembleModel& binary_model) {
  if (binary_model.dimension != BinaryIptFeatures::kDimension)
    throw DimensionMismatch("binary model expects " + std::to_string(binary_model.dimension) +
                            " features, binary IPT features have " +
                            std::to_string(BinaryIptFeatures::kDimension));
  const auto x = binary_ipt_features(text).to_array();
  return binary_model.classify(std::span<const double>(x));
}

nlohmann::json RoundSummary::to_json() const {
  return {{"round", round},           {"queries", queries},         {"entries", entries},
          {"reflections", reflections}, {"new_ipts", new_ipts},     {"new_keywords", new_keywords},
          {"new_urs", new_urs},       {"known_ipts", known_ipts},   {"known_urs", known_urs},
          {"errors", errors}};
}

nlohmann::json SnowballResult::to_json() const {
  nlohmann::json rounds_json = nlohmann::json::array();
  for (const auto& r : rounds) rounds_json.push_back(r.to_json());
  return {{"state", state.to_json()}, {"rounds", rounds_json}};
}

Hunter::Hunter(std::vector<SearchEngineAdapter*> adapters, PageFetcher fetcher, HuntModels models,
               RecordStore& store, Clock& clock, RateLimitPolicy policy)
    : adapters_(std::move(adapters)), fetcher_(std::move(fetcher)), models_(models), store_(store), clock_(clock) {
  for (std::size_t i = 0; i < adapters_.size(); ++i) governors_.push_back(std::make_unique<RateGovernor>(policy, clock_));
}

RoundSummary Hunter::hunt_round(HuntState& state, std::size_t query_budget) {
  RoundSummary summary;
  summary.round = state.round + 1;

  std::vector<std::vector<std::string>> queries;
  for (auto* a : adapters_) queries.push_back(build_queries(state, a->capabilities()));
  for (auto& k : state.keyword_frontier) state.known_keywords.insert(std::move(k));
  for (auto& u : state.urs_frontier) state.known_urs_templates.insert(std::move(u));
  state.keyword_frontier.clear();
  state.urs_frontier.clear();

  auto offer_keyword = [&](const std::string& k) {
    if (k.empty() || state.known_keywords.count(k) || contains(state.keyword_frontier, k)) return;
    state.keyword_frontier.push_back(k);
    ++summary.new_keywords;
  };
  auto offer_urs = [&](const std::string& t) {
    if (state.known_urs_templates.count(t) || contains(state.urs_frontier, t)) return;
    state.urs_frontier.push_back(t);
    ++summary.new_urs;
  };

  for (std::size_t a = 0; a < adapters_.size(); ++a) {
    auto* adapter = adapters_[a];
    for (const auto& q : queries[a]) {
      if (summary.queries >= query_budget) break;
      const auto key = query_key(adapter->id(), q);
      if (state.issued_queries.count(key)) continue;
      state.issued_queries.insert(key);
      ++summary.queries;
      std::vector<SearchResultEntry> entries;
      try {
        entries = governors_[a]->run([&] { return adapter->query(q); });
      } catch (const RateLimited& e) {
        summary.errors.push_back(q + ": " + e.what());
        continue;
      } catch (const StorageIoError&) {
        throw;
      } catch (const Error& e) {
        summary.errors.push_back(q + ": " + e.what());
        continue;
      }
      summary.entries += entries.size();
      for (const auto& e : entries) store_.append(e);

      std::vector<FetchFailure> failures;
      const auto reflected = filter_reflection_entries(entries, fetcher_, &failures);
      for (const auto& f : failures) summary.errors.push_back(f.url + ": " + f.error);
      summary.reflections += reflected.size();
      for (const auto& r : reflected) {
        const auto text = reflected_value(r.finding);
        if (!is_ipt_text(text, models_.binary)) continue;
        store_.append(r.finding);
        const auto urs = canonicalize_urs(r.finding);
        store_.append(urs);
        auto ipt = make_ipt_record(text, r.entry.fetched_at);
        ipt.sources.push_back({record_id(r.entry), record_id(urs)});
        store_.append(ipt);
        offer_urs(urs.template_url);
        if (!state.known_ipt_ids.insert(ipt.id).second) continue;
        ++summary.new_ipts;
        for (const auto& k : extract_keywords(text, models_.segment)) offer_keyword(k);
      }
    }
  }
  ++state.round;
  summary.known_ipts = state.known_ipt_ids.size();
  summary.known_urs = state.known_urs_templates.size() + state.urs_frontier.size();
  return summary;
}

SnowballResult Hunter::resume(HuntState state, const SnowballLimits& limits) {
  SnowballResult result;
  std::size_t issued = 0;
  while (result.rounds.size() < limits.max_rounds && issued < limits.max_queries &&
         (!state.keyword_frontier.empty() || !state.urs_frontier.empty())) {
    auto summary = hunt_round(state, limits.max_queries - issued);
    issued += summary.queries;
    result.rounds.push_back(std::move(summary));
  }
  result.state = std::move(state);
  return result;
}

SnowballResult Hunter::snowball_run(const std::vector<std::string>& seed_keywords,
                                    const std::vector<std::string>& seed_urs, const SnowballLimits& limits) {
  if (seed_keywords.empty() && seed_urs.empty()) throw Error("snowball run needs at least one seed");
  HuntState state;
  for (const auto& k : seed_keywords)
    if (!k.empty() && !contains(state.keyword_frontier, k)) state.keyword_frontier.push_back(k);
  for (const auto& t : seed_urs) {
    const auto urs = urs_from_template(t);
    if (!contains(state.urs_frontier, urs.template_url)) state.urs_frontier.push_back(urs.template_url);
  }
  return resume(std::move(state), limits);
}

nlohmann::json ExposureReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows)
    rows_json.push_back({{"k", r.k},
                         {"poisoned_queries", r.poisoned_queries},
                         {"poisoned_percent", r.poisoned_percent},
                         {"ipt_count", r.ipt_count}});
  return {{"keywords", keywords}, {"rows", rows_json}, {"skipped", skipped}};
}

ExposureReport exposure_probe(const std::vector<std::string>& keywords, SearchEngineAdapter& adapter,
                              const std::vector<std::size_t>& k_levels, const TreeEnsembleModel& binary_model) {
  for (std::size_t i = 1; i < k_levels.size(); ++i)
    if (k_levels[i] <= k_levels[i - 1]) throw Error("k levels must be strictly ascending");
  ExposureReport report;
  for (auto k : k_levels) report.rows.push_back({k, 0, 0.0, 0});
  for (const auto& kw : keywords) {
    std::vector<SearchResultEntry> entries;
    try {
      entries = adapter.query(kw);
    } catch (const Error& e) {
      report.skipped.push_back(kw + ": " + e.what());
      continue;
    }
    ++report.keywords;
    std::vector<std::size_t> ipt_ranks;
    for (const auto& r : filter_reflection_entries(entries, nullptr))
      if (is_ipt_text(reflected_value(r.finding), binary_model)) ipt_ranks.push_back(r.entry.rank);
    for (auto& row : report.rows) {
      const auto within = static_cast<std::size_t>(
          std::count_if(ipt_ranks.begin(), ipt_ranks.end(), [&](std::size_t rank) { return rank <= row.k; }));
      row.ipt_count += within;
      row.poisoned_queries += within > 0;
    }
  }
  for (auto& row : report.rows)
    row.poisoned_percent =
        report.keywords == 0 ? 0.0 : 100.0 * static_cast<double>(row.poisoned_queries) / static_cast<double>(report.keywords);
  return report;
}

}  // namespace ipthunt
