#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ipthunt/core/time.hpp"

namespace ipthunt {

using json = nlohmann::json;

enum class Engine { google, bing, baidu, sogou, mock };

std::string_view to_string(Engine e);
Engine engine_from_string(std::string_view s);

struct SearchResultEntry {
  Engine engine = Engine::mock;
  std::string query;
  int rank = 1;  // 1-based
  std::string url;
  std::string title;
  std::string snippet;
  Timestamp fetched_at{};

  bool operator==(const SearchResultEntry&) const = default;
};

// The fourteen categories of promoted goods/services plus Benign.
enum class CategoryLabel {
  BlackHatSeo,
  HackingService,
  CounterfeitGoods,
  DrugSales,
  DataTheft,
  SexService,
  FakeAccount,
  SurrogacyService,
  FakeCertificate,
  WeaponSales,
  FinancialFraud,
  MoneyLaundering,
  Gambling,
  Others,
  Benign,
};

inline constexpr std::size_t kCategoryCount = 15;

std::string_view to_string(CategoryLabel c);
CategoryLabel category_from_string(std::string_view s);
const std::vector<CategoryLabel>& all_categories();
const std::vector<CategoryLabel>& illicit_categories();
inline bool is_illicit(CategoryLabel c) { return c != CategoryLabel::Benign; }

enum class ContactKind { Website, Telegram, WeChat, QQ, Phone, Other };

std::string_view to_string(ContactKind k);
ContactKind contact_kind_from_string(std::string_view s);

// Half-open range of scalar-value offsets.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  bool operator==(const Span&) const = default;
};

struct Contact {
  ContactKind kind = ContactKind::Other;
  std::string value;
  Span raw_span;
  std::string source_ipt;

  bool operator==(const Contact&) const = default;
};

struct IptSource {
  std::string entry_id;
  std::string urs_id;
  bool operator==(const IptSource&) const = default;
};

struct IptRecord {
  std::string id;
  std::string text;
  std::string normalized_text;
  std::string language = "und";
  std::vector<CategoryLabel> categories;  // kept sorted, unique
  std::vector<Contact> contacts;
  std::vector<IptSource> sources;
  Timestamp first_seen{};
  Timestamp last_seen{};

  bool operator==(const IptRecord&) const = default;
};

// Builds a record whose id and normalized_text derive from `text`.
IptRecord make_ipt_record(std::string text, Timestamp seen);

enum class ReflectionLocation { title, snippet, body_text, metadata, script_var, anchor, data_attr };

inline constexpr std::size_t kLocationCount = 7;
std::string_view to_string(ReflectionLocation l);
ReflectionLocation location_from_string(std::string_view s);
const std::vector<ReflectionLocation>& all_locations();

struct ReflectedParam {
  std::string param_name;  // query key, or "path:<index>" for a path segment
  std::string param_value;
  ReflectionLocation location = ReflectionLocation::body_text;
  bool operator==(const ReflectedParam&) const = default;
};

struct ReflectionFinding {
  std::string url;
  std::vector<ReflectedParam> reflected_params;
  bool operator==(const ReflectionFinding&) const = default;
};

// Reflection slot: query parameter name, or index of the path segment.
using ReflectionParam = std::variant<std::string, std::size_t>;

struct UrlReflectionScheme {
  std::string template_url;  // serialized as "template"
  std::string fqdn;
  std::string apex_domain;
  ReflectionParam reflection_param;
  bool operator==(const UrlReflectionScheme&) const = default;
};

enum class HopMechanism { initial, http_3xx, meta_refresh, js_location };
std::string_view to_string(HopMechanism m);
HopMechanism mechanism_from_string(std::string_view s);

struct Hop {
  std::string url;
  std::string fqdn;
  HopMechanism mechanism = HopMechanism::initial;
  int status = 0;  // 0 when the hop could not be fetched
  bool operator==(const Hop&) const = default;
};

struct RedirectChain {
  std::vector<Hop> hops;
  std::size_t distinct_fqdn_count = 0;
  bool loop = false;
  bool hop_cap_reached = false;
  bool network_error = false;
  std::string error;
  bool operator==(const RedirectChain&) const = default;
};

struct SiteSnapshot {
  std::string website;
  Timestamp taken_at{};
  std::string vantage;
  RedirectChain chain;
  std::string landing_fqdn;
  std::string content_digest;
  std::vector<std::string> iframe_sources;
  bool blocked = false;
  std::string block_evidence;
  bool unreachable = false;
  int landing_status = 0;
  std::string landing_text;
  bool operator==(const SiteSnapshot&) const = default;
};

enum class TelegramKind { user, bot, channel, group };
std::string_view to_string(TelegramKind k);
TelegramKind telegram_kind_from_string(std::string_view s);

struct TelegramAccountProfile {
  std::string handle;
  TelegramKind kind = TelegramKind::user;
  std::optional<std::int64_t> subscriber_or_member_count;
  Timestamp fetched_at{};
  bool operator==(const TelegramAccountProfile&) const = default;
};

struct TelegramMessage {
  std::string handle;
  std::int64_t id = 0;
  Timestamp timestamp{};
  std::string text;
  bool operator==(const TelegramMessage&) const = default;
};

// Invariant checks; throw InvariantViolation naming the failed invariant.
void validate(const SearchResultEntry& r);
void validate(const IptRecord& r);
void validate(const Contact& r, std::string_view source_text = {});
void validate(const ReflectionFinding& r);
void validate(const UrlReflectionScheme& r);
void validate(const SiteSnapshot& r);
void validate(const TelegramAccountProfile& r);
void validate(const TelegramMessage& r);

// Stable identities used by the record store.
std::string record_id(const SearchResultEntry& r);
std::string record_id(const IptRecord& r);
std::string record_id(const Contact& r);
std::string record_id(const ReflectionFinding& r);
std::string record_id(const UrlReflectionScheme& r);
std::string record_id(const SiteSnapshot& r);
std::string record_id(const TelegramAccountProfile& r);
std::string record_id(const TelegramMessage& r);

void to_json(json& j, const SearchResultEntry& r);
void from_json(const json& j, SearchResultEntry& r);
void to_json(json& j, const Span& r);
void from_json(const json& j, Span& r);
void to_json(json& j, const Contact& r);
void from_json(const json& j, Contact& r);
void to_json(json& j, const IptSource& r);
void from_json(const json& j, IptSource& r);
void to_json(json& j, const IptRecord& r);
void from_json(const json& j, IptRecord& r);
void to_json(json& j, const ReflectedParam& r);
void from_json(const json& j, ReflectedParam& r);
void to_json(json& j, const ReflectionFinding& r);
void from_json(const json& j, ReflectionFinding& r);
void to_json(json& j, const UrlReflectionScheme& r);
void from_json(const json& j, UrlReflectionScheme& r);
void to_json(json& j, const Hop& r);
void from_json(const json& j, Hop& r);
void to_json(json& j, const RedirectChain& r);
void from_json(const json& j, RedirectChain& r);
void to_json(json& j, const SiteSnapshot& r);
void from_json(const json& j, SiteSnapshot& r);
void to_json(json& j, const TelegramAccountProfile& r);
void from_json(const json& j, TelegramAccountProfile& r);
void to_json(json& j, const TelegramMessage& r);
void from_json(const json& j, TelegramMessage& r);

}  // namespace ipthunt
