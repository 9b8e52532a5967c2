#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipthunt/core/store.hpp"
#include "ipthunt/hunter/rate.hpp"
#include "ipthunt/learn/multilabel.hpp"

namespace ipthunt {

// Messaging platform access. Implementations throw UnknownHandle for accounts
// that do not exist and RateLimited when the platform pushes back.
class MessagingTransport {
 public:
  virtual ~MessagingTransport() = default;
  // fetched_at is filled in by the caller.
  virtual TelegramAccountProfile get_profile(const std::string& handle) = 0;
  // Messages with id greater than `after_id`, ascending by id.
  virtual std::vector<TelegramMessage> fetch_messages(const std::string& handle, std::int64_t after_id) = 0;
  virtual void join(const std::string& handle) = 0;
};

// Lowercased handle without a leading '@'.
std::string canonical_handle(std::string_view handle);

// File-fixture transport. One JSON object per account:
//
//   {"handle": "deals", "kind": "channel", "count": 1200,
//    "messages": [{"id": 1, "timestamp": "2022-01-03T00:00:00Z", "text": "...", "epoch": 0}]}
//
// Messages become visible once the transport's epoch reaches their "epoch"
// (default 0), which models new posts arriving between fetches.
class FixtureTransport final : public MessagingTransport {
 public:
  FixtureTransport() = default;
  static FixtureTransport from_json(const nlohmann::json& accounts);  // array of account objects
  static FixtureTransport load(const std::filesystem::path& path);    // file with an array, or directory of *.json

  void add_account(const nlohmann::json& account);
  void set_epoch(int epoch) { epoch_ = epoch; }
  int epoch() const { return epoch_; }
  // The next `n` calls throw RateLimited.
  void fail_next(std::size_t n) { pending_failures_ = n; }

  TelegramAccountProfile get_profile(const std::string& handle) override;
  std::vector<TelegramMessage> fetch_messages(const std::string& handle, std::int64_t after_id) override;
  void join(const std::string& handle) override;

  std::size_t calls() const { return calls_; }
  const std::vector<std::string>& joined() const { return joined_; }

 private:
  struct Account {
    TelegramAccountProfile profile;
    std::vector<std::pair<int, TelegramMessage>> messages;  // (epoch, message)
  };
  const Account& account(const std::string& handle);

  std::map<std::string, Account> accounts_;
  int epoch_ = 0;
  std::size_t pending_failures_ = 0;
  std::size_t calls_ = 0;
  std::vector<std::string> joined_;
};

struct TelegramFetch {
  TelegramAccountProfile profile;
  std::vector<TelegramMessage> new_messages;
};

// Persists the account profile and, for channels and groups, every message
// newer than the last one stored for the handle (joining first when nothing
// is stored yet). Transport calls go through `governor`, which backs off on
// RateLimited.
TelegramFetch tg_fetch(const std::string& handle, MessagingTransport& transport, RecordStore& store,
                       RateGovernor& governor, const Clock& clock);

struct MessageCategoryRow {
  CategoryLabel category = CategoryLabel::Others;
  std::size_t messages = 0;
  double percent_of_illicit = 0;  // share of all illicit label assignments
  double percent_of_total = 0;    // share of all messages
};

struct MessageDistribution {
  std::size_t total = 0;
  std::size_t illicit = 0;  // messages with at least one illicit label
  std::vector<MessageCategoryRow> rows;  // largest first, illicit labels only
};

MessageDistribution classify_messages(const std::vector<TelegramMessage>& messages,
                                      const LabelClassifier& classifier);

}  // namespace ipthunt
