#include "ipthunt/reflection/reflection.hpp"

#include <algorithm>
#include <vector>

#include "ipthunt/core/errors.hpp"
#include "ipthunt/core/text.hpp"
#include "ipthunt/core/url.hpp"
#include "ipthunt/reflection/public_suffix.hpp"

namespace ipthunt {

namespace {

constexpr std::string_view kSentinel = "ipthunt-slot-7f3a";
constexpr std::string_view kPathPrefix = "path:";

struct Candidate {
  std::string name;
  std::string value;
};

std::vector<Candidate> candidates(const Url& u) {
  std::vector<Candidate> out;
  for (const auto& p : u.query_params())
    out.push_back({percent_decode(p.key, true), percent_decode(p.value, true)});
  const auto segs = u.path_segments();
  if (!segs.empty() && !segs.back().empty())
    out.push_back({std::string(kPathPrefix) + std::to_string(segs.size() - 1),
                   percent_decode(segs.back(), true)});
  return out;
}

bool is_path_param(std::string_view name) { return name.starts_with(kPathPrefix); }

const ReflectedParam& chosen_param(const ReflectionFinding& f) {
  if (f.reflected_params.empty()) throw InvariantViolation("reflected_params non-empty");
  for (const auto& p : f.reflected_params)
    if (!is_path_param(p.param_name)) return p;
  return f.reflected_params.front();
}

struct SlotTemplate {
  Url url;
  std::optional<std::size_t> query_index;
  std::optional<std::size_t> path_index;
};

SlotTemplate parse_template(std::string_view template_url) {
  std::string probe(template_url);
  const auto pos = probe.find(kSlot);
  if (pos == std::string::npos) throw InvariantViolation("template contains exactly one {R}");
  probe.replace(pos, kSlot.size(), kSentinel);
  SlotTemplate t{parse_url(probe), std::nullopt, std::nullopt};
  const auto params = t.url.query_params();
  for (std::size_t i = 0; i < params.size(); ++i)
    if (params[i].value == kSentinel) t.query_index = i;
  const auto segs = t.url.path_segments();
  for (std::size_t i = 0; i < segs.size(); ++i)
    if (segs[i] == kSentinel) t.path_index = i;
  if (!t.query_index && !t.path_index) throw InvariantViolation("slot is a whole query value or path segment");
  return t;
}

std::vector<std::pair<std::string, std::string>> sorted_pairs(const std::vector<QueryParam>& ps) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& p : ps) out.emplace_back(p.key, p.has_equals ? "=" + p.value : "");
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::optional<ReflectionFinding> detect_reflection(const SearchResultEntry& entry,
                                                   const PageText& page) {
  const Url u = parse_url(entry.url);
  ReflectionFinding finding;
  finding.url = entry.url;
  for (const auto& c : candidates(u)) {
    if (scalar_length(c.value) < kMinReflectedLength) continue;
    for (const auto& [location, text] : page) {
      if (text.find(c.value) != std::string::npos)
        finding.reflected_params.push_back({c.name, c.value, location});
    }
  }
  if (finding.reflected_params.empty()) return std::nullopt;
  return finding;
}

std::string reflected_value(const ReflectionFinding& finding) {
  return chosen_param(finding).param_value;
}

UrlReflectionScheme canonicalize_urs(const ReflectionFinding& finding) {
  const auto& chosen = chosen_param(finding);
  Url u = parse_url(finding.url);
  UrlReflectionScheme urs;
  if (is_path_param(chosen.param_name)) {
    const std::size_t index = std::stoul(chosen.param_name.substr(kPathPrefix.size()));
    auto segs = u.path_segments();
    if (index >= segs.size()) throw InvariantViolation("reflected path segment exists");
    segs[index] = std::string(kSlot);
    u.path = join_path(segs);
    urs.reflection_param = index;
  } else {
    auto params = u.query_params();
    bool replaced = false;
    for (auto& p : params) {
      if (percent_decode(p.key, true) == chosen.param_name &&
          percent_decode(p.value, true) == chosen.param_value) {
        p.value = std::string(kSlot);
        p.has_equals = true;
        replaced = true;
        break;
      }
    }
    if (!replaced) throw InvariantViolation("reflected parameter present in url");
    u.query = join_query(params);
    urs.reflection_param = chosen.param_name;
  }
  u.fragment.reset();
  urs.template_url = u.without_fragment();
  urs.fqdn = u.host;
  urs.apex_domain = apex_domain(u.host);
  return urs;
}

std::string instantiate(std::string_view template_url, std::string_view value) {
  std::string out(template_url);
  const auto pos = out.find(kSlot);
  if (pos == std::string::npos) throw InvariantViolation("template contains exactly one {R}");
  out.replace(pos, kSlot.size(), percent_encode(value));
  return out;
}

std::optional<std::string> match_urs(const UrlReflectionScheme& urs, std::string_view url) {
  const Url candidate = parse_url(url);
  const SlotTemplate t = parse_template(urs.template_url);
  if (candidate.scheme != t.url.scheme || candidate.host != t.url.host ||
      candidate.port != t.url.port || candidate.userinfo != t.url.userinfo)
    return std::nullopt;

  const auto tsegs = t.url.path_segments();
  const auto csegs = candidate.path_segments();
  if (tsegs.size() != csegs.size()) return std::nullopt;
  std::optional<std::string> slot_raw;
  for (std::size_t i = 0; i < tsegs.size(); ++i) {
    if (t.path_index && *t.path_index == i) {
      if (csegs[i].empty()) return std::nullopt;
      slot_raw = csegs[i];
    } else if (tsegs[i] != csegs[i]) {
      return std::nullopt;
    }
  }

  auto tparams = t.url.query_params();
  auto cparams = candidate.query_params();
  if (tparams.size() != cparams.size()) return std::nullopt;
  if (t.query_index) {
    const std::string slot_key = tparams[*t.query_index].key;
    tparams.erase(tparams.begin() + static_cast<std::ptrdiff_t>(*t.query_index));
    auto it = std::find_if(cparams.begin(), cparams.end(),
                           [&](const QueryParam& p) { return p.key == slot_key && p.has_equals; });
    if (it == cparams.end()) return std::nullopt;
    // Prefer the occurrence whose removal makes the rest match.
    bool found = false;
    for (auto c = cparams.begin(); c != cparams.end(); ++c) {
      if (c->key != slot_key || !c->has_equals) continue;
      auto rest = cparams;
      rest.erase(rest.begin() + (c - cparams.begin()));
      if (sorted_pairs(rest) == sorted_pairs(tparams)) {
        slot_raw = c->value;
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  } else if (sorted_pairs(tparams) != sorted_pairs(cparams)) {
    return std::nullopt;
  }
  if (!slot_raw) return std::nullopt;
  return percent_decode(*slot_raw, true);
}

std::string urs_prefix(const UrlReflectionScheme& urs) {
  const auto pos = urs.template_url.find(kSlot);
  return pos == std::string::npos ? urs.template_url : urs.template_url.substr(0, pos);
}

UrlReflectionScheme urs_from_template(std::string_view template_url) {
  const SlotTemplate t = parse_template(template_url);
  UrlReflectionScheme urs;
  urs.template_url = std::string(template_url);
  urs.fqdn = t.url.host;
  urs.apex_domain = apex_domain(t.url.host);
  if (t.query_index)
    urs.reflection_param = percent_decode(t.url.query_params()[*t.query_index].key, true);
  else
    urs.reflection_param = *t.path_index;
  return urs;
}

}  // namespace ipthunt
