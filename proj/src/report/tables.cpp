#include "ipthunt/report/tables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <unicode/uchar.h>

#include "ipthunt/core/errors.hpp"
#include "ipthunt/core/text.hpp"
#include "ipthunt/infiltrate/site.hpp"
#include "ipthunt/infiltrate/telegram.hpp"

namespace ipthunt {

namespace {

std::size_t display_width(std::string_view s) {
  std::size_t w = 0;
  for (char32_t cp : to_u32(s)) {
    const auto eaw = u_getIntPropertyValue(static_cast<UChar32>(cp), UCHAR_EAST_ASIAN_WIDTH);
    w += (eaw == U_EA_WIDE || eaw == U_EA_FULLWIDTH) ? 2 : 1;
  }
  return w;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string percent_of(std::size_t part, std::size_t whole) {
  return format_percent(whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole));
}

struct Usage {
  std::set<std::string> ipts;
  std::set<std::string> entries;
};

// Sourced IPT usage grouped per URS template and per apex domain.
struct SourceIndex {
  std::map<std::string, Usage> by_template;
  std::map<std::string, Usage> by_domain;
  std::size_t ipts = 0;
  std::set<std::string> entries;
};

SourceIndex index_sources(const RecordStore& store) {
  SourceIndex idx;
  std::map<std::string, std::pair<std::string, std::string>> urs_cache;
  for (const auto& ipt : store.query_as<IptRecord>()) {
    if (ipt.sources.empty()) continue;
    ++idx.ipts;
    for (const auto& src : ipt.sources) {
      auto it = urs_cache.find(src.urs_id);
      if (it == urs_cache.end()) {
        const auto urs = store.find<UrlReflectionScheme>(src.urs_id);
        it = urs_cache
                 .emplace(src.urs_id, urs ? std::pair{urs->template_url, urs->apex_domain}
                                          : std::pair{src.urs_id, std::string("(unknown)")})
                 .first;
      }
      auto& t = idx.by_template[it->second.first];
      auto& d = idx.by_domain[it->second.second];
      t.ipts.insert(ipt.id);
      d.ipts.insert(ipt.id);
      t.entries.insert(src.entry_id);
      d.entries.insert(src.entry_id);
      idx.entries.insert(src.entry_id);
    }
  }
  return idx;
}

using Ranked = std::vector<std::pair<std::string, const Usage*>>;

Ranked rank_usage(const std::map<std::string, Usage>& m) {
  Ranked r;
  for (const auto& [k, u] : m) r.emplace_back(k, &u);
  std::stable_sort(r.begin(), r.end(), [](const auto& x, const auto& y) {
    return x.second->ipts.size() > y.second->ipts.size();
  });
  return r;
}

ReportTable usage_table(std::string title, std::string key_column, const Ranked& ranked, std::size_t n,
                        const SourceIndex& idx) {
  ReportTable t;
  t.title = std::move(title);
  t.columns = {std::move(key_column), "IPTs", "%IPTs", "RSPs", "%RSPs"};
  for (std::size_t i = 0; i < ranked.size() && i < n; ++i) {
    const auto& u = *ranked[i].second;
    t.rows.push_back({ranked[i].first, std::to_string(u.ipts.size()), percent_of(u.ipts.size(), idx.ipts),
                      std::to_string(u.entries.size()), percent_of(u.entries.size(), idx.entries.size())});
  }
  t.provenance = std::to_string(idx.ipts) + " sourced IPT records, " + std::to_string(idx.entries.size()) +
                 " RSP entries, " + std::to_string(ranked.size()) + " keys";
  return t;
}

std::string percent_label(double k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g%%", k);
  return buf;
}

ReportTable coverage_table(std::string title, const Ranked& ranked, const std::vector<double>& top_percent,
                           const SourceIndex& idx) {
  ReportTable t;
  t.title = std::move(title);
  t.columns = {"Top", "Keys", "%IPTs", "%RSPs"};
  for (double k : top_percent) {
    if (!(k > 0 && k <= 100)) throw Error("top share must be in (0, 100]");
    const auto count = std::min(
        ranked.size(),
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(k / 100.0 * static_cast<double>(ranked.size()) - 1e-9))));
    std::set<std::string> ipts, entries;
    for (std::size_t i = 0; i < count; ++i) {
      ipts.insert(ranked[i].second->ipts.begin(), ranked[i].second->ipts.end());
      entries.insert(ranked[i].second->entries.begin(), ranked[i].second->entries.end());
    }
    t.rows.push_back({percent_label(k), std::to_string(count), percent_of(ipts.size(), idx.ipts),
                      percent_of(entries.size(), idx.entries.size())});
  }
  t.provenance = std::to_string(ranked.size()) + " keys ranked by %IPTs";
  return t;
}

std::string threshold_label(std::size_t t) {
  if (t >= 1000000 && t % 1000000 == 0) return "Top " + std::to_string(t / 1000000) + "M";
  if (t >= 1000 && t % 1000 == 0) return "Top " + std::to_string(t / 1000) + "K";
  return "Top " + std::to_string(t);
}

}  // namespace

TableFormat table_format_from_string(std::string_view s) {
  if (s == "text") return TableFormat::text;
  if (s == "csv") return TableFormat::csv;
  throw Error("unknown table format: " + std::string(s));
}

std::string format_percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", value);
  return buf;
}

std::string ReportTable::to_text() const {
  std::vector<std::size_t> widths(columns.size(), 0);
  for (std::size_t c = 0; c < columns.size(); ++c) widths[c] = display_width(columns[c]);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size() && c < widths.size(); ++c) widths[c] = std::max(widths[c], display_width(row[c]));
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < widths.size(); ++c) {
      const std::string cell = c < cells.size() ? cells[c] : "";
      const std::string pad(widths[c] - display_width(cell), ' ');
      if (c > 0) out += "  ";
      out += c == 0 ? cell + pad : pad + cell;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = title + "\n" + line(columns);
  std::size_t total = 0;
  for (auto w : widths) total += w;
  out += std::string(total + 2 * (widths.empty() ? 0 : widths.size() - 1), '-') + "\n";
  for (const auto& row : rows) out += line(row);
  if (!provenance.empty()) out += "(" + provenance + ")\n";
  return out;
}

std::string ReportTable::to_csv() const {
  auto line = [](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) out += (c ? "," : "") + csv_field(cells[c]);
    return out + "\r\n";
  };
  std::string out = line(columns);
  for (const auto& row : rows) out += line(row);
  return out;
}

std::string ReportTable::render(TableFormat format) const { return format == TableFormat::csv ? to_csv() : to_text(); }

ReportTable report_category_distribution(const RecordStore& store) {
  std::map<CategoryLabel, std::size_t> counts;
  std::size_t assignments = 0;
  std::size_t records = 0;
  for (const auto& ipt : store.query_as<IptRecord>()) {
    if (ipt.categories.empty()) continue;
    ++records;
    for (auto c : ipt.categories) {
      ++counts[c];
      ++assignments;
    }
  }
  if (records == 0) throw EmptyStore("no classified IPT records in " + store.dir().string());
  std::vector<std::pair<std::string, std::size_t>> rows;
  for (const auto& [c, n] : counts) rows.emplace_back(std::string(to_string(c)), n);
  std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
    return x.second != y.second ? x.second > y.second : x.first < y.first;
  });
  ReportTable t;
  t.title = "IPTs by category";
  t.columns = {"Category", "Assignments", "%IPTs"};
  for (const auto& [name, n] : rows) t.rows.push_back({name, std::to_string(n), percent_of(n, assignments)});
  t.provenance = std::to_string(records) + " classified IPT records, " + std::to_string(assignments) +
                 " label assignments";
  return t;
}

TopAbusedReport report_top_abused(const RecordStore& store, std::size_t n, const std::vector<double>& top_percent) {
  const auto idx = index_sources(store);
  if (idx.ipts == 0) throw EmptyStore("no sourced IPT records in " + store.dir().string());
  const auto templates = rank_usage(idx.by_template);
  const auto domains = rank_usage(idx.by_domain);
  return {usage_table("Most abused URL reflection schemes", "URS", templates, n, idx),
          usage_table("Most abused apex domains", "Domain", domains, n, idx),
          coverage_table("Cumulative share of top URL reflection schemes", templates, top_percent, idx),
          coverage_table("Cumulative share of top apex domains", domains, top_percent, idx)};
}

std::vector<std::string> read_ranking(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw UnreadableRanking("cannot read ranking file " + file.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto comma = line.find(',');
    if (comma != std::string::npos) line = line.substr(comma + 1);
    const auto b = line.find_first_not_of(" \t");
    const auto e = line.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? std::string() : ascii_lower(line.substr(b, e - b + 1)));
  }
  if (in.bad()) throw UnreadableRanking("error reading ranking file " + file.string());
  return out;
}

ReportTable report_popularity_overlap(const RecordStore& store, const std::filesystem::path& ranking_file) {
  auto t = report_popularity_overlap(store, read_ranking(ranking_file));
  t.provenance += ", ranking " + ranking_file.filename().string();
  return t;
}

ReportTable report_popularity_overlap(const RecordStore& store, const std::vector<std::string>& ranking) {
  const auto idx = index_sources(store);
  std::map<std::string, std::size_t> rank_of;
  for (std::size_t i = 0; i < ranking.size(); ++i)
    if (!ranking[i].empty()) rank_of.emplace(ranking[i], i + 1);
  std::vector<std::pair<std::size_t, const Usage*>> ranked;
  for (const auto& [domain, usage] : idx.by_domain) {
    auto it = rank_of.find(domain);
    if (it != rank_of.end()) ranked.emplace_back(it->second, &usage);
  }
  ReportTable t;
  t.title = "Abused domains among the most popular websites";
  t.columns = {"Ranking", "Abused domains", "%IPTs", "%RSPs"};
  t.provenance = std::to_string(idx.by_domain.size()) + " abused apex domains, " + std::to_string(ranking.size()) +
                 " ranked domains";
  if (ranked.empty()) return t;
  for (std::size_t threshold : {100u, 1000u, 10000u, 100000u, 1000000u}) {
    std::size_t count = 0;
    std::set<std::string> ipts, entries;
    for (const auto& [rank, usage] : ranked) {
      if (rank > threshold) continue;
      ++count;
      ipts.insert(usage->ipts.begin(), usage->ipts.end());
      entries.insert(usage->entries.begin(), usage->entries.end());
    }
    t.rows.push_back({threshold_label(threshold), std::to_string(count), percent_of(ipts.size(), idx.ipts),
                      percent_of(entries.size(), idx.entries.size())});
  }
  return t;
}

ReportTable report_languages(const RecordStore& store) {
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;
  for (const auto& ipt : store.query_as<IptRecord>()) {
    ++counts[ipt.language];
    ++total;
  }
  if (total == 0) throw EmptyStore("no IPT records in " + store.dir().string());
  std::vector<std::pair<std::string, std::size_t>> rows(counts.begin(), counts.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
  ReportTable t;
  t.title = "IPTs by language";
  t.columns = {"Language", "IPTs", "%IPTs"};
  for (const auto& [lang, n] : rows) t.rows.push_back({lang, std::to_string(n), percent_of(n, total)});
  t.provenance = std::to_string(total) + " IPT records";
  return t;
}

ReportTable report_contacts(const RecordStore& store) {
  std::map<std::string, std::set<std::string>> values;
  for (const auto& c : store.query_as<Contact>()) values[std::string(to_string(c.kind))].insert(c.value);
  std::size_t total = 0;
  for (const auto& [_, v] : values) total += v.size();
  if (total == 0) throw EmptyStore("no contact records in " + store.dir().string());
  std::vector<std::pair<std::string, std::size_t>> rows;
  for (const auto& [k, v] : values) rows.emplace_back(k, v.size());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
  ReportTable t;
  t.title = "Distinct contacts by kind";
  t.columns = {"Kind", "Contacts", "%Contacts"};
  for (const auto& [k, n] : rows) t.rows.push_back({k, std::to_string(n), percent_of(n, total)});
  t.provenance = std::to_string(total) + " distinct contact values";
  return t;
}

ReportTable report_redirects(const RecordStore& store) {
  const auto snaps = store.query_as<SiteSnapshot>();
  if (snaps.empty()) throw EmptyStore("no snapshots in " + store.dir().string());
  ReportTable t;
  t.title = "Websites by redirect chain length";
  t.columns = {"Redirects", "Snapshots", "%Snapshots", "Websites", "%Websites"};
  for (const auto& r : redirect_length_table(snaps))
    t.rows.push_back({">= " + std::to_string(r.at_least), std::to_string(r.snapshots), format_percent(r.snapshot_percent),
                      std::to_string(r.websites), format_percent(r.website_percent)});
  t.provenance = std::to_string(snaps.size()) + " snapshots";
  return t;
}

ReportTable report_landings(const RecordStore& store, std::size_t n) {
  const auto snaps = store.query_as<SiteSnapshot>();
  if (snaps.empty()) throw EmptyStore("no snapshots in " + store.dir().string());
  const auto clusters = cluster_by_landing(snaps);
  const auto latest = clusters.clusters.back().epoch;
  const auto current = clusters.in_epoch(latest);
  std::size_t sites = 0;
  for (const auto& c : current) sites += c.websites.size();
  ReportTable t;
  t.title = "Shared landing pages";
  t.columns = {"Landing FQDN", "Websites", "%Websites"};
  for (std::size_t i = 0; i < current.size() && i < n; ++i)
    t.rows.push_back({current[i].landing_fqdn, std::to_string(current[i].websites.size()),
                      percent_of(current[i].websites.size(), sites)});
  std::size_t multi = 0;
  for (const auto& [_, k] : clusters.distinct_landings) multi += k >= 2;
  t.provenance = std::to_string(sites) + " websites in week " + std::to_string(latest) + ", " + std::to_string(multi) +
                 " with two or more distinct landings overall";
  return t;
}

ReportTable report_telegram(const RecordStore& store, const LabelClassifier& classifier) {
  const auto msgs = store.query_as<TelegramMessage>();
  if (msgs.empty()) throw EmptyStore("no Telegram messages in " + store.dir().string());
  const auto d = classify_messages(msgs, classifier);
  ReportTable t;
  t.title = "Telegram messages by category";
  t.columns = {"Category", "Messages", "%Illicit", "%All"};
  for (const auto& r : d.rows)
    t.rows.push_back({std::string(to_string(r.category)), std::to_string(r.messages), format_percent(r.percent_of_illicit),
                      format_percent(r.percent_of_total)});
  t.provenance = std::to_string(d.total) + " messages, " + std::to_string(d.illicit) + " with an illicit label";
  return t;
}

}  // namespace ipthunt
