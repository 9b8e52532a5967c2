#include "ipthunt/hunter/rate.hpp"

namespace ipthunt {

RateGovernor::RateGovernor(RateLimitPolicy policy, Clock& clock) : policy_(policy), clock_(clock) {
  if (policy_.tokens_per_interval == 0) throw Error("rate policy needs at least one token per interval");
  if (policy_.interval <= Duration::zero()) throw Error("rate policy interval must be positive");
}

void RateGovernor::acquire() {
  for (;;) {
    const auto now = clock_.now();
    while (!window_.empty() && window_.front() + policy_.interval <= now) window_.pop_front();
    if (window_.size() < policy_.tokens_per_interval) {
      window_.push_back(now);
      log_.push_back(now);
      return;
    }
    ++waits_;
    clock_.sleep_for(window_.front() + policy_.interval - now);
  }
}

}  // namespace ipthunt
