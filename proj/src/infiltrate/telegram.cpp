#include "ipthunt/infiltrate/telegram.hpp"

#include <algorithm>
#include <fstream>

#include "ipthunt/core/errors.hpp"
#include "ipthunt/core/text.hpp"

namespace ipthunt {

std::string canonical_handle(std::string_view handle) {
  if (!handle.empty() && handle.front() == '@') handle.remove_prefix(1);
  return ascii_lower(handle);
}

FixtureTransport FixtureTransport::from_json(const nlohmann::json& accounts) {
  FixtureTransport t;
  for (const auto& a : accounts) t.add_account(a);
  return t;
}

FixtureTransport FixtureTransport::load(const std::filesystem::path& path) {
  auto read = [](const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw StorageIoError("cannot read " + file.string());
    try {
      return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error("bad transport fixture " + file.string() + ": " + e.what());
    }
  };
  FixtureTransport t;
  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(path))
      if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) t.add_account(read(f));
  } else {
    const auto j = read(path);
    if (j.is_array())
      for (const auto& a : j) t.add_account(a);
    else
      t.add_account(j);
  }
  return t;
}

void FixtureTransport::add_account(const nlohmann::json& j) {
  try {
    Account a;
    a.profile.handle = canonical_handle(j.at("handle").get<std::string>());
    a.profile.kind = telegram_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("count") && !j.at("count").is_null()) a.profile.subscriber_or_member_count = j.at("count").get<std::int64_t>();
    if (j.contains("messages")) {
      for (const auto& m : j.at("messages")) {
        TelegramMessage msg;
        msg.handle = a.profile.handle;
        msg.id = m.at("id").get<std::int64_t>();
        msg.timestamp = parse_timestamp(m.at("timestamp").get<std::string>());
        msg.text = m.value("text", "");
        a.messages.emplace_back(m.value("epoch", 0), std::move(msg));
      }
    }
    std::sort(a.messages.begin(), a.messages.end(),
              [](const auto& x, const auto& y) { return x.second.id < y.second.id; });
    accounts_[a.profile.handle] = std::move(a);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad transport fixture account: ") + e.what());
  }
}

const FixtureTransport::Account& FixtureTransport::account(const std::string& handle) {
  ++calls_;
  if (pending_failures_ > 0) {
    --pending_failures_;
    throw RateLimited("transport rate limit");
  }
  auto it = accounts_.find(canonical_handle(handle));
  if (it == accounts_.end()) throw UnknownHandle(handle);
  return it->second;
}

TelegramAccountProfile FixtureTransport::get_profile(const std::string& handle) { return account(handle).profile; }

std::vector<TelegramMessage> FixtureTransport::fetch_messages(const std::string& handle, std::int64_t after_id) {
  const auto& a = account(handle);
  std::vector<TelegramMessage> out;
  for (const auto& [epoch, m] : a.messages)
    if (epoch <= epoch_ && m.id > after_id) out.push_back(m);
  return out;
}

void FixtureTransport::join(const std::string& handle) { joined_.push_back(account(handle).profile.handle); }

TelegramFetch tg_fetch(const std::string& handle, MessagingTransport& transport, RecordStore& store,
                       RateGovernor& governor, const Clock& clock) {
  const auto h = canonical_handle(handle);
  TelegramFetch out;
  out.profile = governor.run([&] { return transport.get_profile(h); });
  out.profile.handle = h;
  out.profile.fetched_at = clock.now();
  store.append(out.profile);
  if (out.profile.kind != TelegramKind::channel && out.profile.kind != TelegramKind::group) return out;

  const auto stored = store.query_as<TelegramMessage>([&](const TelegramMessage& m) { return m.handle == h; });
  std::optional<std::int64_t> last;
  for (const auto& m : stored) last = std::max(last.value_or(m.id), m.id);
  if (!last) governor.run([&] { transport.join(h); });
  auto batch = governor.run([&] { return transport.fetch_messages(h, last.value_or(0)); });
  std::sort(batch.begin(), batch.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
  for (auto& m : batch) {
    if (last && m.id <= *last) continue;
    if (!out.new_messages.empty() && out.new_messages.back().id == m.id) continue;
    m.handle = h;
    store.append(m);
    out.new_messages.push_back(std::move(m));
  }
  return out;
}

MessageDistribution classify_messages(const std::vector<TelegramMessage>& messages,
                                      const LabelClassifier& classifier) {
  MessageDistribution d;
  d.total = messages.size();
  std::map<CategoryLabel, std::size_t> counts;
  std::size_t assignments = 0;
  for (const auto& m : messages) {
    bool illicit = false;
    for (auto c : classifier.classify(m.text)) {
      if (!is_illicit(c)) continue;
      ++counts[c];
      ++assignments;
      illicit = true;
    }
    d.illicit += illicit;
  }
  for (const auto& [c, n] : counts)
    d.rows.push_back({c, n, 100.0 * n / assignments, 100.0 * n / d.total});
  std::stable_sort(d.rows.begin(), d.rows.end(),
                   [](const auto& x, const auto& y) { return x.messages > y.messages; });
  return d;
}

}  // namespace ipthunt
