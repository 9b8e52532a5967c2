#pragma once

#include <cstddef>
#include <deque>
#include <functional>

#include "ipthunt/core/errors.hpp"
#include "ipthunt/core/time.hpp"

namespace ipthunt {

struct RateLimitPolicy {
  std::size_t tokens_per_interval = 10;
  Duration interval{60};
  Duration backoff_on_limit{30};
  std::size_t max_retries = 3;
};

// Sliding-window dispatcher: no interval-long window ever holds more than
// tokens_per_interval dispatches. Waiting goes through the clock.
class RateGovernor {
 public:
  RateGovernor(RateLimitPolicy policy, Clock& clock);

  // Blocks (via the clock) until a dispatch is allowed, then records it.
  void acquire();

  // acquire() then fn(); on RateLimited backs off and retries up to
  // max_retries times before rethrowing.
  template <typename Fn>
  auto run(Fn&& fn) -> decltype(fn()) {
    for (std::size_t attempt = 0;; ++attempt) {
      acquire();
      try {
        return fn();
      } catch (const RateLimited&) {
        ++limited_;
        if (attempt >= policy_.max_retries) throw;
        clock_.sleep_for(policy_.backoff_on_limit);
      }
    }
  }

  const std::deque<Timestamp>& dispatches() const { return log_; }
  std::size_t waits() const { return waits_; }
  std::size_t limited() const { return limited_; }
  const RateLimitPolicy& policy() const { return policy_; }

 private:
  RateLimitPolicy policy_;
  Clock& clock_;
  std::deque<Timestamp> window_;
  std::deque<Timestamp> log_;
  std::size_t waits_ = 0;
  std::size_t limited_ = 0;
};

}  // namespace ipthunt
