#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace ipthunt {

// UTC timestamp with second resolution, serialized as "YYYY-MM-DDTHH:MM:SSZ".
using Timestamp = std::chrono::sys_seconds;
using Duration = std::chrono::seconds;

std::string format_timestamp(Timestamp t);
Timestamp parse_timestamp(std::string_view iso);

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Timestamp now() const = 0;
  virtual void sleep_for(Duration d) = 0;
};

class SystemClock final : public Clock {
 public:
  Timestamp now() const override;
  void sleep_for(Duration d) override;
};

// Deterministic clock for tests and reproducible runs: sleeping advances time
// instantly.
class VirtualClock final : public Clock {
 public:
  explicit VirtualClock(Timestamp start) : now_(start) {}
  Timestamp now() const override { return now_; }
  void sleep_for(Duration d) override { now_ += d; }
  void advance(Duration d) { now_ += d; }

 private:
  Timestamp now_;
};

}  // namespace ipthunt
