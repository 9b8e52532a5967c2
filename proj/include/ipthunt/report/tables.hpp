#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "ipthunt/core/store.hpp"
#include "ipthunt/learn/multilabel.hpp"

namespace ipthunt {

enum class TableFormat { text, csv };
TableFormat table_format_from_string(std::string_view s);

struct ReportTable {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string provenance;  // which records the table was computed from

  // Aligned plain text: title, header, rule, rows, provenance footer.
  std::string to_text() const;
  // RFC 4180 CSV: header line then rows.
  std::string to_csv() const;
  std::string render(TableFormat format) const;
};

// Two decimals followed by '%'.
std::string format_percent(double value);

// Share of every assigned category label among all label assignments of
// classified IPT records, largest first. Throws EmptyStore when no record
// carries a category.
ReportTable report_category_distribution(const RecordStore& store);

struct TopAbusedReport {
  ReportTable templates;          // URS templates
  ReportTable domains;            // apex domains
  ReportTable template_coverage;  // cumulative share of the top k% templates
  ReportTable domain_coverage;    // cumulative share of the top k% domains
};

// Per URS template and per apex domain: distinct IPTs (%IPTs over distinct
// IPT ids with sources) and RSP cases (%RSPs over distinct search-result
// entries). Lists the top `n` rows of each and the cumulative shares of the
// top k% for each k in `top_percent`. Throws EmptyStore without sourced IPTs.
TopAbusedReport report_top_abused(const RecordStore& store, std::size_t n = 20,
                                  const std::vector<double>& top_percent = {5, 10});

// Ranking file: one apex domain per line (optionally "rank,domain"), rank =
// line number. Throws UnreadableRanking.
std::vector<std::string> read_ranking(const std::filesystem::path& file);

// Abused apex domains inside the top 100/1K/10K/100K/1M of the ranking, with
// the share of IPTs and RSP cases they carry. No rows when none is ranked.
ReportTable report_popularity_overlap(const RecordStore& store, const std::filesystem::path& ranking_file);
ReportTable report_popularity_overlap(const RecordStore& store, const std::vector<std::string>& ranking);

// Languages of stored IPT records, largest first.
ReportTable report_languages(const RecordStore& store);

// Contacts per kind across stored Contact records.
ReportTable report_contacts(const RecordStore& store);

// Cumulative chain-length buckets over stored snapshots.
ReportTable report_redirects(const RecordStore& store);

// Largest shared-landing clusters (latest epoch) over stored snapshots.
ReportTable report_landings(const RecordStore& store, std::size_t n = 20);

// Category distribution of stored Telegram messages under `classifier`.
ReportTable report_telegram(const RecordStore& store, const LabelClassifier& classifier);

}  // namespace ipthunt
