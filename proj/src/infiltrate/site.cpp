#include "ipthunt/infiltrate/site.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "ipthunt/core/digest.hpp"
#include "ipthunt/core/errors.hpp"
#include "ipthunt/core/text.hpp"
#include "ipthunt/core/url.hpp"
#include "ipthunt/infiltrate/html.hpp"
#include "ipthunt/reflection/public_suffix.hpp"

namespace ipthunt {

namespace {

bool is_redirect_status(int s) { return s == 301 || s == 302 || s == 303 || s == 307 || s == 308; }

std::string visit_key(const std::string& url) {
  const auto u = try_parse_url(url);
  return u ? u->without_fragment() : url;
}

struct NextHop {
  std::string url;
  HopMechanism mechanism;
};

std::optional<NextHop> next_hop(const std::string& url, const FetchResponse& r) {
  if (is_redirect_status(r.status)) {
    const auto loc = r.header("location");
    if (!loc.empty()) return NextHop{resolve_url(url, loc), HopMechanism::http_3xx};
    return std::nullopt;
  }
  if (auto t = meta_refresh_target(r.body)) return NextHop{resolve_url(url, *t), HopMechanism::meta_refresh};
  if (auto t = script_redirect_target(r.body)) return NextHop{resolve_url(url, *t), HopMechanism::js_location};
  return std::nullopt;
}

std::size_t count_fqdns(const std::vector<Hop>& hops) {
  std::set<std::string> s;
  for (const auto& h : hops) s.insert(h.fqdn);
  return s.size();
}

bool has_illicit(const std::vector<CategoryLabel>& labels) {
  return std::any_of(labels.begin(), labels.end(), is_illicit);
}

}  // namespace

ChainResult follow_chain(const std::string& url, FetchBackend& backend, std::size_t hop_cap) {
  if (hop_cap == 0) throw Error("hop cap must be positive");
  ChainResult out;
  auto& chain = out.chain;
  std::set<std::string> visited;
  std::string current = parse_url(url).to_string();
  auto mechanism = HopMechanism::initial;
  while (true) {
    if (chain.hops.size() >= hop_cap) {
      chain.hop_cap_reached = true;
      break;
    }
    const auto parsed = try_parse_url(current);
    if (!parsed) {
      chain.network_error = true;
      chain.error = "malformed redirect target: " + current;
      break;
    }
    Hop hop{current, parsed->host, mechanism, 0};
    visited.insert(visit_key(current));
    try {
      auto response = backend.get(current);
      hop.status = response.status;
      chain.hops.push_back(hop);
      out.landing = std::move(response);
    } catch (const NetworkError& e) {
      chain.hops.push_back(hop);
      chain.network_error = true;
      chain.error = e.what();
      out.landing.reset();
      break;
    }
    const auto next = next_hop(current, *out.landing);
    if (!next) break;
    if (visited.count(visit_key(next->url))) {
      chain.loop = true;
      break;
    }
    current = next->url;
    mechanism = next->mechanism;
  }
  chain.distinct_fqdn_count = count_fqdns(chain.hops);
  return out;
}

RedirectChain fetch_chain(const std::string& url, FetchBackend& backend, std::size_t hop_cap) {
  return follow_chain(url, backend, hop_cap).chain;
}

SiteSnapshot snapshot_site(const std::string& website, FetchBackend& backend, Timestamp taken_at,
                           const SnapshotOptions& options) {
  SiteSnapshot s;
  s.website = website;
  s.taken_at = taken_at;
  s.vantage = backend.vantage();
  auto result = follow_chain(website, backend, options.hop_cap);
  s.chain = std::move(result.chain);
  s.landing_fqdn = s.chain.hops.back().fqdn;
  if (!result.landing) {
    s.unreachable = true;
    validate(s);
    return s;
  }
  const auto& landing = *result.landing;
  const auto& landing_url = s.chain.hops.back().url;
  s.landing_status = landing.status;
  s.content_digest = digest128(collapse_whitespace(landing.body));
  s.landing_text = visible_text(landing.body);
  for (const auto& src : iframe_sources(landing.body)) {
    const auto resolved = resolve_url(landing_url, src);
    if (try_parse_url(resolved) && std::find(s.iframe_sources.begin(), s.iframe_sources.end(), resolved) == s.iframe_sources.end())
      s.iframe_sources.push_back(resolved);
  }
  if (std::count(options.block_statuses.begin(), options.block_statuses.end(), landing.status)) {
    s.blocked = true;
    s.block_evidence = "status " + std::to_string(landing.status);
  } else {
    const auto lowered = ascii_lower(s.landing_text);
    for (const auto& p : options.block_patterns) {
      if (!p.empty() && lowered.find(ascii_lower(p)) != std::string::npos) {
        s.blocked = true;
        s.block_evidence = "pattern \"" + p + "\"";
        break;
      }
    }
  }
  validate(s);
  return s;
}

std::vector<SiteSnapshot> snapshot_sites(const std::vector<std::string>& websites, FetchBackend& backend,
                                         Timestamp taken_at, const SnapshotOptions& options, std::size_t threads) {
  std::vector<SiteSnapshot> out(websites.size());
  std::vector<std::exception_ptr> errors(websites.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(1, websites.size()));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < websites.size();) {
          try {
            out[i] = snapshot_site(websites[i], backend, taken_at, options);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::optional<CloakingFinding> detect_iframe_cloaking(const SiteSnapshot& snapshot, FetchBackend& backend,
                                                      const LabelClassifier& classifier,
                                                      std::vector<IframeFailure>* failures) {
  if (snapshot.iframe_sources.empty() || snapshot.unreachable) return std::nullopt;
  const auto host_apex = apex_domain(snapshot.landing_fqdn);
  std::optional<bool> host_benign;
  for (const auto& src : snapshot.iframe_sources) {
    const auto u = try_parse_url(src);
    if (!u) {
      if (failures) failures->push_back({src, "malformed url"});
      continue;
    }
    const auto frame_apex = apex_domain(u->host);
    if (frame_apex == host_apex) continue;
    FetchResponse r;
    try {
      r = backend.get(src);
    } catch (const NetworkError& e) {
      if (failures) failures->push_back({src, e.what()});
      continue;
    }
    const auto labels = classifier.classify(visible_text(r.body));
    if (!has_illicit(labels)) continue;
    if (!host_benign) host_benign = !has_illicit(classifier.classify(snapshot.landing_text));
    if (!*host_benign) return std::nullopt;
    std::vector<CategoryLabel> illicit;
    std::copy_if(labels.begin(), labels.end(), std::back_inserter(illicit), is_illicit);
    return CloakingFinding{snapshot.website, host_apex, src, frame_apex, illicit};
  }
  return std::nullopt;
}

DivergenceReport compare_vantage(const SiteSnapshot& a, const SiteSnapshot& b, Duration window) {
  if (a.website != b.website) throw MissingCounterpart("snapshots are of different websites");
  if (a.vantage == b.vantage) throw MissingCounterpart("both snapshots are from vantage " + a.vantage);
  const auto gap = a.taken_at > b.taken_at ? a.taken_at - b.taken_at : b.taken_at - a.taken_at;
  if (gap > window) throw MissingCounterpart("no counterpart within the comparison window for " + a.website);
  DivergenceReport r;
  r.website = a.website;
  r.vantage_a = a.vantage;
  r.vantage_b = b.vantage;
  r.landing_apex_a = apex_domain(a.landing_fqdn);
  r.landing_apex_b = apex_domain(b.landing_fqdn);
  r.blocked_a = a.blocked;
  r.blocked_b = b.blocked;
  r.unreachable_a = a.unreachable;
  r.unreachable_b = b.unreachable;
  r.landing_differs = r.landing_apex_a != r.landing_apex_b;
  r.content_differs = a.landing_status == 200 && b.landing_status == 200 && !a.unreachable && !b.unreachable &&
                      a.content_digest != b.content_digest;
  r.divergent = r.landing_differs || r.content_differs || a.blocked != b.blocked || a.unreachable != b.unreachable;
  return r;
}

DivergenceReport compare_vantage(const std::vector<SiteSnapshot>& snapshots, const std::string& website,
                                 const std::string& vantage_a, const std::string& vantage_b, Duration window) {
  const SiteSnapshot* best_a = nullptr;
  const SiteSnapshot* best_b = nullptr;
  Duration best_gap = Duration::max();
  for (const auto& a : snapshots) {
    if (a.website != website || a.vantage != vantage_a) continue;
    for (const auto& b : snapshots) {
      if (b.website != website || b.vantage != vantage_b) continue;
      const auto gap = a.taken_at > b.taken_at ? a.taken_at - b.taken_at : b.taken_at - a.taken_at;
      if (gap < best_gap) {
        best_gap = gap;
        best_a = &a;
        best_b = &b;
      }
    }
  }
  if (!best_a) throw MissingCounterpart("no snapshot pair of " + website + " from " + vantage_a + " and " + vantage_b);
  return compare_vantage(*best_a, *best_b, window);
}

std::int64_t epoch_of(Timestamp t, Duration period) {
  if (period.count() <= 0) throw Error("epoch period must be positive");
  const auto origin = std::chrono::sys_days{std::chrono::year{1970} / 1 / 5};
  const auto delta = (t - origin).count();
  const auto p = period.count();
  return delta >= 0 ? delta / p : -((-delta + p - 1) / p);
}

std::vector<LandingCluster> LandingClusters::in_epoch(std::int64_t epoch) const {
  std::vector<LandingCluster> out;
  for (const auto& c : clusters)
    if (c.epoch == epoch) out.push_back(c);
  return out;
}

LandingClusters cluster_by_landing(const std::vector<SiteSnapshot>& snapshots, Duration period) {
  if (snapshots.empty()) throw Error("no snapshots to cluster");
  std::map<std::pair<std::int64_t, std::string>, const SiteSnapshot*> latest;
  std::map<std::string, std::set<std::string>> landings;
  for (const auto& s : snapshots) {
    auto& slot = latest[{epoch_of(s.taken_at, period), s.website}];
    if (!slot || s.taken_at > slot->taken_at || (s.taken_at == slot->taken_at && s.vantage < slot->vantage)) slot = &s;
    landings[s.website].insert(s.landing_fqdn);
  }
  std::map<std::pair<std::int64_t, std::string>, std::vector<std::string>> groups;
  for (const auto& [key, s] : latest) groups[{key.first, s->landing_fqdn}].push_back(key.second);
  LandingClusters out;
  for (auto& [key, sites] : groups) out.clusters.push_back({key.first, key.second, std::move(sites)});
  std::sort(out.clusters.begin(), out.clusters.end(), [](const LandingCluster& x, const LandingCluster& y) {
    if (x.epoch != y.epoch) return x.epoch < y.epoch;
    if (x.websites.size() != y.websites.size()) return x.websites.size() > y.websites.size();
    return x.landing_fqdn < y.landing_fqdn;
  });
  for (const auto& [site, set] : landings) out.distinct_landings[site] = set.size();
  return out;
}

std::vector<RedirectLengthRow> redirect_length_table(const std::vector<SiteSnapshot>& snapshots,
                                                     std::vector<std::size_t> thresholds) {
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  std::map<std::string, std::size_t> longest;
  for (const auto& s : snapshots) {
    auto& l = longest[s.website];
    l = std::max(l, s.chain.distinct_fqdn_count);
  }
  std::vector<RedirectLengthRow> rows;
  for (auto k : thresholds) {
    RedirectLengthRow r;
    r.at_least = k;
    for (const auto& s : snapshots) r.snapshots += s.chain.distinct_fqdn_count >= k;
    for (const auto& [_, l] : longest) r.websites += l >= k;
    r.snapshot_percent = snapshots.empty() ? 0 : 100.0 * r.snapshots / snapshots.size();
    r.website_percent = longest.empty() ? 0 : 100.0 * r.websites / longest.size();
    rows.push_back(r);
  }
  return rows;
}

}  // namespace ipthunt
