#pragma once

#include <chrono>
#include <cstdint>
#include <optional>

namespace pushplan {

/// Cooperative planning budget: wall-clock deadline plus an optional cap on abstract
/// work units (search expansions, edge evaluations) for reproducible runs.
class Budget {
 public:
  using Clock = std::chrono::steady_clock;

  Budget() = default;
  Budget(double seconds, std::optional<std::int64_t> work_limit = std::nullopt)
      : deadline_(Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(
                                     seconds < 0 ? 0.0 : seconds))),
        timed_(true),
        work_limit_(work_limit),
        zero_(seconds <= 0.0) {}

  static Budget unlimited() { return Budget(); }
  static Budget work_units(std::int64_t limit) {
    Budget b;
    b.work_limit_ = limit;
    return b;
  }

  void charge(std::int64_t units = 1) { work_ += units; }
  std::int64_t work() const { return work_; }

  bool expired() const {
    if (zero_) return true;
    if (work_limit_ && work_ >= *work_limit_) return true;
    return timed_ && Clock::now() >= deadline_;
  }

 private:
  Clock::time_point deadline_{};
  bool timed_ = false;
  std::optional<std::int64_t> work_limit_;
  bool zero_ = false;
  std::int64_t work_ = 0;
};

}  // namespace pushplan
