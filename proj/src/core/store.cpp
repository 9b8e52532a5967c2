#include "ipthunt/core/store.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <mutex>

#include "ipthunt/core/errors.hpp"

namespace ipthunt {

namespace {

constexpr std::array<std::string_view, kRecordKindCount> kKindNames{
    "search_result", "ipt", "contact", "reflection_finding", "urs", "snapshot", "tg_profile",
    "tg_message"};

template <typename T>
Record parse_as(const json& j) {
  return Record{j.get<T>()};
}

Record parse_record(RecordKind kind, const json& j) {
  switch (kind) {
    case RecordKind::search_result: return parse_as<SearchResultEntry>(j);
    case RecordKind::ipt: return parse_as<IptRecord>(j);
    case RecordKind::contact: return parse_as<Contact>(j);
    case RecordKind::reflection_finding: return parse_as<ReflectionFinding>(j);
    case RecordKind::urs: return parse_as<UrlReflectionScheme>(j);
    case RecordKind::snapshot: return parse_as<SiteSnapshot>(j);
    case RecordKind::tg_profile: return parse_as<TelegramAccountProfile>(j);
    case RecordKind::tg_message: return parse_as<TelegramMessage>(j);
  }
  throw StorageIoError("unknown record kind");
}

}  // namespace

std::string_view to_string(RecordKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

RecordKind record_kind_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i)
    if (kKindNames[i] == s) return static_cast<RecordKind>(i);
  throw Error("unknown record kind: " + std::string(s));
}

RecordKind kind_of(const Record& r) {
  return std::visit([](const auto& v) { return kind_for<std::decay_t<decltype(v)>>(); }, r);
}

std::string record_id(const Record& r) {
  return std::visit([](const auto& v) { return record_id(v); }, r);
}

IptRecord merge_ipt(const IptRecord& existing, const IptRecord& incoming) {
  IptRecord merged = existing;
  for (const auto& s : incoming.sources)
    if (std::find(merged.sources.begin(), merged.sources.end(), s) == merged.sources.end())
      merged.sources.push_back(s);
  merged.first_seen = std::min(existing.first_seen, incoming.first_seen);
  merged.last_seen = std::max(existing.last_seen, incoming.last_seen);
  if (!incoming.categories.empty()) merged.categories = incoming.categories;
  if (!incoming.contacts.empty()) merged.contacts = incoming.contacts;
  if (incoming.language != "und") merged.language = incoming.language;
  return merged;
}

RecordStore::RecordStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw StorageIoError("cannot create store directory " + dir_.string() + ": " + ec.message());
  for (std::size_t k = 0; k < kRecordKindCount; ++k) load(static_cast<RecordKind>(k));
}

std::filesystem::path RecordStore::file_for(RecordKind kind) const {
  return dir_ / (std::string(to_string(kind)) + ".jsonl");
}

void RecordStore::load(RecordKind kind) {
  const auto path = file_for(kind);
  if (!std::filesystem::exists(path)) return;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageIoError("cannot read " + path.string());
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto& data = kinds_[static_cast<std::size_t>(kind)];
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    const auto nl = content.find('\n', pos);
    // An unterminated tail line is an in-flight write; readers stop before it.
    if (nl == std::string::npos) break;
    ++line_no;
    const std::string_view line(content.data() + pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    Record rec;
    try {
      rec = parse_record(kind, json::parse(line));
    } catch (const std::exception& e) {
      throw StorageIoError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    const auto id = record_id(rec);
    if (auto it = data.index.find(id); it != data.index.end()) {
      data.records[it->second] = std::move(rec);
    } else {
      data.index.emplace(id, data.records.size());
      data.records.push_back(std::move(rec));
    }
  }
}

void RecordStore::write_line(RecordKind kind, const Record& record) {
  const auto path = file_for(kind);
  std::string line = std::visit([](const auto& v) { return json(v).dump(); }, record);
  line.push_back('\n');
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw StorageIoError("cannot open " + path.string() + " for append");
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  out.flush();
  if (!out) throw StorageIoError("write failed on " + path.string());
}

std::string RecordStore::append(const Record& record) {
  std::visit([](const auto& v) { validate(v); }, record);
  const auto kind = kind_of(record);
  const auto id = record_id(record);

  std::unique_lock lock(mutex_);
  auto& data = kinds_[static_cast<std::size_t>(kind)];
  auto it = data.index.find(id);
  if (it == data.index.end()) {
    write_line(kind, record);
    data.index.emplace(id, data.records.size());
    data.records.push_back(record);
    return id;
  }
  Record updated = record;
  if (kind == RecordKind::ipt)
    updated = merge_ipt(std::get<IptRecord>(data.records[it->second]), std::get<IptRecord>(record));
  if (updated == data.records[it->second]) return id;
  write_line(kind, updated);
  data.records[it->second] = std::move(updated);
  return id;
}

std::vector<Record> RecordStore::query(RecordKind kind,
                                       const std::function<bool(const Record&)>& pred) const {
  std::shared_lock lock(mutex_);
  std::vector<Record> out;
  for (const auto& r : kinds_[static_cast<std::size_t>(kind)].records)
    if (!pred || pred(r)) out.push_back(r);
  return out;
}

std::size_t RecordStore::count(RecordKind kind) const {
  std::shared_lock lock(mutex_);
  return kinds_[static_cast<std::size_t>(kind)].records.size();
}

}  // namespace ipthunt
