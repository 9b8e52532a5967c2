#include "ipthunt/core/types.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "ipthunt/core/contact_grammar.hpp"
#include "ipthunt/core/digest.hpp"
#include "ipthunt/core/errors.hpp"
#include "ipthunt/core/text.hpp"
#include "ipthunt/core/url.hpp"

namespace ipthunt {

namespace {

template <typename E, std::size_t N>
E lookup(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view s,
         const char* what) {
  for (const auto& [e, name] : table)
    if (name == s) return e;
  throw Error(std::string("unknown ") + what + ": " + std::string(s));
}

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E e) {
  for (const auto& [v, name] : table)
    if (v == e) return name;
  return "?";
}

constexpr std::array<std::pair<Engine, std::string_view>, 5> kEngines{{
    {Engine::google, "google"},
    {Engine::bing, "bing"},
    {Engine::baidu, "baidu"},
    {Engine::sogou, "sogou"},
    {Engine::mock, "mock"},
}};

constexpr std::array<std::pair<CategoryLabel, std::string_view>, kCategoryCount> kCategories{{
    {CategoryLabel::BlackHatSeo, "Black Hat SEO & Advertisement"},
    {CategoryLabel::HackingService, "Hacking Service"},
    {CategoryLabel::CounterfeitGoods, "Counterfeit Goods"},
    {CategoryLabel::DrugSales, "Drug Sales"},
    {CategoryLabel::DataTheft, "Data Theft"},
    {CategoryLabel::SexService, "Sex Service"},
    {CategoryLabel::FakeAccount, "Fake Account"},
    {CategoryLabel::SurrogacyService, "Surrogacy Service"},
    {CategoryLabel::FakeCertificate, "Fake Certificate"},
    {CategoryLabel::WeaponSales, "Weapon Sales"},
    {CategoryLabel::FinancialFraud, "Financial Fraud"},
    {CategoryLabel::MoneyLaundering, "Money Laundering"},
    {CategoryLabel::Gambling, "Gambling"},
    {CategoryLabel::Others, "Others"},
    {CategoryLabel::Benign, "Benign"},
}};

constexpr std::array<std::pair<ContactKind, std::string_view>, 6> kContactKinds{{
    {ContactKind::Website, "Website"},
    {ContactKind::Telegram, "Telegram"},
    {ContactKind::WeChat, "WeChat"},
    {ContactKind::QQ, "QQ"},
    {ContactKind::Phone, "Phone"},
    {ContactKind::Other, "Other"},
}};

constexpr std::array<std::pair<ReflectionLocation, std::string_view>, kLocationCount> kLocations{{
    {ReflectionLocation::title, "title"},
    {ReflectionLocation::snippet, "snippet"},
    {ReflectionLocation::body_text, "body_text"},
    {ReflectionLocation::metadata, "metadata"},
    {ReflectionLocation::script_var, "script_var"},
    {ReflectionLocation::anchor, "anchor"},
    {ReflectionLocation::data_attr, "data_attr"},
}};

constexpr std::array<std::pair<HopMechanism, std::string_view>, 4> kMechanisms{{
    {HopMechanism::initial, "initial"},
    {HopMechanism::http_3xx, "http_3xx"},
    {HopMechanism::meta_refresh, "meta_refresh"},
    {HopMechanism::js_location, "js_location"},
}};

constexpr std::array<std::pair<TelegramKind, std::string_view>, 4> kTelegramKinds{{
    {TelegramKind::user, "user"},
    {TelegramKind::bot, "bot"},
    {TelegramKind::channel, "channel"},
    {TelegramKind::group, "group"},
}};

void require(bool ok, const char* invariant) {
  if (!ok) throw InvariantViolation(invariant);
}

}  // namespace

std::string_view to_string(Engine e) { return name_of(kEngines, e); }
Engine engine_from_string(std::string_view s) { return lookup(kEngines, s, "engine"); }

std::string_view to_string(CategoryLabel c) { return name_of(kCategories, c); }
CategoryLabel category_from_string(std::string_view s) { return lookup(kCategories, s, "category"); }

const std::vector<CategoryLabel>& all_categories() {
  static const std::vector<CategoryLabel> all = [] {
    std::vector<CategoryLabel> v;
    for (const auto& [c, _] : kCategories) v.push_back(c);
    return v;
  }();
  return all;
}

const std::vector<CategoryLabel>& illicit_categories() {
  static const std::vector<CategoryLabel> illicit = [] {
    std::vector<CategoryLabel> v;
    for (const auto& [c, _] : kCategories)
      if (is_illicit(c)) v.push_back(c);
    return v;
  }();
  return illicit;
}

std::string_view to_string(ContactKind k) { return name_of(kContactKinds, k); }
ContactKind contact_kind_from_string(std::string_view s) {
  return lookup(kContactKinds, s, "contact kind");
}

std::string_view to_string(ReflectionLocation l) { return name_of(kLocations, l); }
ReflectionLocation location_from_string(std::string_view s) {
  return lookup(kLocations, s, "reflection location");
}
const std::vector<ReflectionLocation>& all_locations() {
  static const std::vector<ReflectionLocation> all = [] {
    std::vector<ReflectionLocation> v;
    for (const auto& [l, _] : kLocations) v.push_back(l);
    return v;
  }();
  return all;
}

std::string_view to_string(HopMechanism m) { return name_of(kMechanisms, m); }
HopMechanism mechanism_from_string(std::string_view s) {
  return lookup(kMechanisms, s, "hop mechanism");
}

std::string_view to_string(TelegramKind k) { return name_of(kTelegramKinds, k); }
TelegramKind telegram_kind_from_string(std::string_view s) {
  return lookup(kTelegramKinds, s, "telegram kind");
}

IptRecord make_ipt_record(std::string text, Timestamp seen) {
  IptRecord r;
  r.normalized_text = normalize_ipt_text(text);
  r.id = digest128(r.normalized_text);
  r.text = std::move(text);
  r.first_seen = seen;
  r.last_seen = seen;
  return r;
}

// ---- validation ------------------------------------------------------------

void validate(const SearchResultEntry& r) {
  require(r.rank >= 1, "rank >= 1");
  require(try_parse_url(r.url).has_value(), "url parses as absolute http(s) URL");
}

void validate(const Contact& r, std::string_view source_text) {
  require(r.raw_span.start <= r.raw_span.end, "raw_span start <= end");
  if (!source_text.empty())
    require(r.raw_span.end <= scalar_length(source_text), "raw_span within text bounds");
  require(valid_contact_value(r.kind, r.value), "contact value satisfies its kind grammar");
}

void validate(const IptRecord& r) {
  require(r.id == digest128(r.normalized_text), "id is the digest of normalized_text");
  require(r.normalized_text == normalize_ipt_text(r.text), "normalized_text = normalize(text)");
  require(!r.sources.empty(), "sources non-empty for persisted records");
  require(r.first_seen <= r.last_seen, "first_seen <= last_seen");
  const bool benign =
      std::find(r.categories.begin(), r.categories.end(), CategoryLabel::Benign) != r.categories.end();
  require(!benign || r.categories.size() == 1, "Benign exclusive with illicit labels");
  for (const auto& c : r.contacts) validate(c, r.text);
}

void validate(const ReflectionFinding& r) {
  require(!r.reflected_params.empty(), "reflected_params non-empty");
  require(try_parse_url(r.url).has_value(), "finding url parses");
}

void validate(const UrlReflectionScheme& r) {
  std::size_t n = 0;
  for (auto pos = r.template_url.find("{R}"); pos != std::string::npos;
       pos = r.template_url.find("{R}", pos + 3))
    ++n;
  require(n == 1, "template contains exactly one {R}");
  std::string probe = r.template_url;
  probe.replace(probe.find("{R}"), 3, "probe");
  const auto u = try_parse_url(probe);
  require(u.has_value(), "instantiated template is a valid URL");
  require(u->host == r.fqdn, "fqdn is the host of template");
  require(!r.apex_domain.empty() && (r.fqdn == r.apex_domain || r.fqdn.ends_with("." + r.apex_domain)),
          "apex_domain is a suffix of fqdn");
}

void validate(const SiteSnapshot& r) {
  if (!r.chain.hops.empty())
    require(r.landing_fqdn == r.chain.hops.back().fqdn, "landing_fqdn = last hop fqdn");
  require(!r.blocked || !r.block_evidence.empty(), "blocked implies recorded evidence");
  if (!r.chain.hops.empty())
    require(r.chain.hops.front().mechanism == HopMechanism::initial, "first hop is initial");
}

void validate(const TelegramAccountProfile& r) {
  require(!r.handle.empty(), "handle non-empty");
  require(!r.subscriber_or_member_count || *r.subscriber_or_member_count >= 0, "counts >= 0");
}

void validate(const TelegramMessage& r) { require(!r.handle.empty(), "handle non-empty"); }

// ---- identities --------------------------------------------------------------

std::string record_id(const SearchResultEntry& r) {
  return digest128("sre\x1f" + std::string(to_string(r.engine)) + "\x1f" + r.query + "\x1f" +
                   std::to_string(r.rank) + "\x1f" + r.url);
}
std::string record_id(const IptRecord& r) { return r.id; }
std::string record_id(const Contact& r) {
  return digest128("contact\x1f" + std::string(to_string(r.kind)) + "\x1f" + r.value + "\x1f" +
                   r.source_ipt);
}
std::string record_id(const ReflectionFinding& r) { return digest128("rf\x1f" + r.url); }
std::string record_id(const UrlReflectionScheme& r) { return digest128("urs\x1f" + r.template_url); }
std::string record_id(const SiteSnapshot& r) {
  return digest128("snap\x1f" + r.website + "\x1f" + r.vantage + "\x1f" +
                   format_timestamp(r.taken_at));
}
std::string record_id(const TelegramAccountProfile& r) {
  return digest128("tgp\x1f" + r.handle + "\x1f" + format_timestamp(r.fetched_at));
}
std::string record_id(const TelegramMessage& r) {
  return digest128("tgm\x1f" + r.handle + "\x1f" + std::to_string(r.id));
}

// ---- JSON ----------------------------------------------------------------------

void to_json(json& j, const SearchResultEntry& r) {
  j = json{{"engine", to_string(r.engine)}, {"query", r.query},   {"rank", r.rank},
           {"url", r.url},                  {"title", r.title},   {"snippet", r.snippet},
           {"fetched_at", format_timestamp(r.fetched_at)}};
}
void from_json(const json& j, SearchResultEntry& r) {
  r.engine = engine_from_string(j.at("engine").get<std::string>());
  r.query = j.at("query").get<std::string>();
  r.rank = j.at("rank").get<int>();
  r.url = j.at("url").get<std::string>();
  r.title = j.value("title", "");
  r.snippet = j.value("snippet", "");
  r.fetched_at = parse_timestamp(j.at("fetched_at").get<std::string>());
}

void to_json(json& j, const Span& r) { j = json::array({r.start, r.end}); }
void from_json(const json& j, Span& r) {
  r.start = j.at(0).get<std::size_t>();
  r.end = j.at(1).get<std::size_t>();
}

void to_json(json& j, const Contact& r) {
  j = json{{"kind", to_string(r.kind)},
           {"value", r.value},
           {"raw_span", r.raw_span},
           {"source_ipt", r.source_ipt}};
}
void from_json(const json& j, Contact& r) {
  r.kind = contact_kind_from_string(j.at("kind").get<std::string>());
  r.value = j.at("value").get<std::string>();
  r.raw_span = j.at("raw_span").get<Span>();
  r.source_ipt = j.value("source_ipt", "");
}

void to_json(json& j, const IptSource& r) { j = json::array({r.entry_id, r.urs_id}); }
void from_json(const json& j, IptSource& r) {
  r.entry_id = j.at(0).get<std::string>();
  r.urs_id = j.at(1).get<std::string>();
}

void to_json(json& j, const IptRecord& r) {
  json cats = json::array();
  for (auto c : r.categories) cats.push_back(to_string(c));
  j = json{{"id", r.id},
           {"text", r.text},
           {"normalized_text", r.normalized_text},
           {"language", r.language},
           {"categories", cats},
           {"contacts", r.contacts},
           {"sources", r.sources},
           {"first_seen", format_timestamp(r.first_seen)},
           {"last_seen", format_timestamp(r.last_seen)}};
}
void from_json(const json& j, IptRecord& r) {
  r.id = j.at("id").get<std::string>();
  r.text = j.at("text").get<std::string>();
  r.normalized_text = j.at("normalized_text").get<std::string>();
  r.language = j.value("language", "und");
  r.categories.clear();
  for (const auto& c : j.at("categories")) r.categories.push_back(category_from_string(c.get<std::string>()));
  r.contacts = j.at("contacts").get<std::vector<Contact>>();
  r.sources = j.at("sources").get<std::vector<IptSource>>();
  r.first_seen = parse_timestamp(j.at("first_seen").get<std::string>());
  r.last_seen = parse_timestamp(j.at("last_seen").get<std::string>());
}

void to_json(json& j, const ReflectedParam& r) {
  j = json{{"param_name", r.param_name},
           {"param_value", r.param_value},
           {"location", to_string(r.location)}};
}
void from_json(const json& j, ReflectedParam& r) {
  r.param_name = j.at("param_name").get<std::string>();
  r.param_value = j.at("param_value").get<std::string>();
  r.location = location_from_string(j.at("location").get<std::string>());
}

void to_json(json& j, const ReflectionFinding& r) {
  j = json{{"url", r.url}, {"reflected_params", r.reflected_params}};
}
void from_json(const json& j, ReflectionFinding& r) {
  r.url = j.at("url").get<std::string>();
  r.reflected_params = j.at("reflected_params").get<std::vector<ReflectedParam>>();
}

void to_json(json& j, const UrlReflectionScheme& r) {
  j = json{{"template", r.template_url}, {"fqdn", r.fqdn}, {"apex_domain", r.apex_domain}};
  if (const auto* name = std::get_if<std::string>(&r.reflection_param))
    j["reflection_param"] = *name;
  else
    j["reflection_param"] = std::get<std::size_t>(r.reflection_param);
}
void from_json(const json& j, UrlReflectionScheme& r) {
  r.template_url = j.at("template").get<std::string>();
  r.fqdn = j.at("fqdn").get<std::string>();
  r.apex_domain = j.at("apex_domain").get<std::string>();
  if (!j.contains("reflection_param")) {
    r.reflection_param = std::string{};
  } else if (j.at("reflection_param").is_number()) {
    r.reflection_param = j.at("reflection_param").get<std::size_t>();
  } else {
    r.reflection_param = j.at("reflection_param").get<std::string>();
  }
}

void to_json(json& j, const Hop& r) {
  j = json{{"url", r.url}, {"fqdn", r.fqdn}, {"mechanism", to_string(r.mechanism)}, {"status", r.status}};
}
void from_json(const json& j, Hop& r) {
  r.url = j.at("url").get<std::string>();
  r.fqdn = j.at("fqdn").get<std::string>();
  r.mechanism = mechanism_from_string(j.at("mechanism").get<std::string>());
  r.status = j.at("status").get<int>();
}

void to_json(json& j, const RedirectChain& r) {
  j = json{{"hops", r.hops},
           {"distinct_fqdn_count", r.distinct_fqdn_count},
           {"loop", r.loop},
           {"hop_cap_reached", r.hop_cap_reached},
           {"network_error", r.network_error},
           {"error", r.error}};
}
void from_json(const json& j, RedirectChain& r) {
  r.hops = j.at("hops").get<std::vector<Hop>>();
  r.distinct_fqdn_count = j.at("distinct_fqdn_count").get<std::size_t>();
  r.loop = j.value("loop", false);
  r.hop_cap_reached = j.value("hop_cap_reached", false);
  r.network_error = j.value("network_error", false);
  r.error = j.value("error", "");
}

void to_json(json& j, const SiteSnapshot& r) {
  j = json{{"website", r.website},
           {"taken_at", format_timestamp(r.taken_at)},
           {"vantage", r.vantage},
           {"chain", r.chain},
           {"landing_fqdn", r.landing_fqdn},
           {"content_digest", r.content_digest},
           {"iframe_sources", r.iframe_sources},
           {"blocked", r.blocked},
           {"block_evidence", r.block_evidence},
           {"unreachable", r.unreachable},
           {"landing_status", r.landing_status},
           {"landing_text", r.landing_text}};
}
void from_json(const json& j, SiteSnapshot& r) {
  r.website = j.at("website").get<std::string>();
  r.taken_at = parse_timestamp(j.at("taken_at").get<std::string>());
  r.vantage = j.at("vantage").get<std::string>();
  r.chain = j.at("chain").get<RedirectChain>();
  r.landing_fqdn = j.at("landing_fqdn").get<std::string>();
  r.content_digest = j.at("content_digest").get<std::string>();
  r.iframe_sources = j.at("iframe_sources").get<std::vector<std::string>>();
  r.blocked = j.at("blocked").get<bool>();
  r.block_evidence = j.value("block_evidence", "");
  r.unreachable = j.value("unreachable", false);
  r.landing_status = j.value("landing_status", 0);
  r.landing_text = j.value("landing_text", "");
}

void to_json(json& j, const TelegramAccountProfile& r) {
  j = json{{"handle", r.handle},
           {"kind", to_string(r.kind)},
           {"subscriber_or_member_count", nullptr},
           {"fetched_at", format_timestamp(r.fetched_at)}};
  if (r.subscriber_or_member_count) j["subscriber_or_member_count"] = *r.subscriber_or_member_count;
}
void from_json(const json& j, TelegramAccountProfile& r) {
  r.handle = j.at("handle").get<std::string>();
  r.kind = telegram_kind_from_string(j.at("kind").get<std::string>());
  r.subscriber_or_member_count.reset();
  if (j.contains("subscriber_or_member_count") && !j.at("subscriber_or_member_count").is_null())
    r.subscriber_or_member_count = j.at("subscriber_or_member_count").get<std::int64_t>();
  r.fetched_at = parse_timestamp(j.at("fetched_at").get<std::string>());
}

void to_json(json& j, const TelegramMessage& r) {
  j = json{{"handle", r.handle},
           {"id", r.id},
           {"timestamp", format_timestamp(r.timestamp)},
           {"text", r.text}};
}
void from_json(const json& j, TelegramMessage& r) {
  r.handle = j.at("handle").get<std::string>();
  r.id = j.at("id").get<std::int64_t>();
  r.timestamp = parse_timestamp(j.at("timestamp").get<std::string>());
  r.text = j.at("text").get<std::string>();
}

}  // namespace ipthunt
