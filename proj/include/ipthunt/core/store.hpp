#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ipthunt/core/types.hpp"

namespace ipthunt {

enum class RecordKind {
  search_result,
  ipt,
  contact,
  reflection_finding,
  urs,
  snapshot,
  tg_profile,
  tg_message,
};

inline constexpr std::size_t kRecordKindCount = 8;
std::string_view to_string(RecordKind k);
RecordKind record_kind_from_string(std::string_view s);

using Record = std::variant<SearchResultEntry, IptRecord, Contact, ReflectionFinding,
                            UrlReflectionScheme, SiteSnapshot, TelegramAccountProfile,
                            TelegramMessage>;

RecordKind kind_of(const Record& r);
std::string record_id(const Record& r);

template <typename T>
constexpr RecordKind kind_for();

// Append-only JSON-lines store, one file per record kind under `dir`
// (`<dir>/<kind>.jsonl`). The in-memory index is rebuilt on open; a later
// line for an existing id supersedes the earlier one, and records keep the
// position of their first appearance.
//
// Re-appending an IptRecord with a known id merges sources, widens the
// first/last-seen window and takes non-empty categories/contacts from the
// incoming copy. Re-appending an identical record writes nothing.
//
// One writer, any number of readers.
class RecordStore {
 public:
  explicit RecordStore(std::filesystem::path dir);

  RecordStore(const RecordStore&) = delete;
  RecordStore& operator=(const RecordStore&) = delete;

  std::string append(const Record& record);

  std::vector<Record> query(RecordKind kind,
                            const std::function<bool(const Record&)>& pred = {}) const;

  template <typename T>
  std::vector<T> query_as(const std::function<bool(const T&)>& pred = {}) const {
    std::vector<T> out;
    std::shared_lock lock(mutex_);
    for (const auto& r : kinds_[static_cast<std::size_t>(kind_for<T>())].records) {
      const auto& typed = std::get<T>(r);
      if (!pred || pred(typed)) out.push_back(typed);
    }
    return out;
  }

  template <typename T>
  std::optional<T> find(const std::string& id) const {
    std::shared_lock lock(mutex_);
    const auto& k = kinds_[static_cast<std::size_t>(kind_for<T>())];
    auto it = k.index.find(id);
    if (it == k.index.end()) return std::nullopt;
    return std::get<T>(k.records[it->second]);
  }

  std::size_t count(RecordKind kind) const;
  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path file_for(RecordKind kind) const;

 private:
  struct KindData {
    std::vector<Record> records;
    std::unordered_map<std::string, std::size_t> index;
  };

  void load(RecordKind kind);
  void write_line(RecordKind kind, const Record& record);

  std::filesystem::path dir_;
  KindData kinds_[kRecordKindCount];
  mutable std::shared_mutex mutex_;
};

template <typename T>
constexpr RecordKind kind_for() {
  if constexpr (std::is_same_v<T, SearchResultEntry>) return RecordKind::search_result;
  else if constexpr (std::is_same_v<T, IptRecord>) return RecordKind::ipt;
  else if constexpr (std::is_same_v<T, Contact>) return RecordKind::contact;
  else if constexpr (std::is_same_v<T, ReflectionFinding>) return RecordKind::reflection_finding;
  else if constexpr (std::is_same_v<T, UrlReflectionScheme>) return RecordKind::urs;
  else if constexpr (std::is_same_v<T, SiteSnapshot>) return RecordKind::snapshot;
  else if constexpr (std::is_same_v<T, TelegramAccountProfile>) return RecordKind::tg_profile;
  else if constexpr (std::is_same_v<T, TelegramMessage>) return RecordKind::tg_message;
  else static_assert(sizeof(T) == 0, "not a record type");
}

// Merge rule for duplicate IptRecords (exposed for tests).
IptRecord merge_ipt(const IptRecord& existing, const IptRecord& incoming);

}  // namespace ipthunt
