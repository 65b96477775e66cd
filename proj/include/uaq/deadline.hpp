#pragma once

#include <chrono>
#include <optional>

#include "uaq/errors.hpp"

namespace uaq {

/// Cooperative wall-clock limit; check() throws TimeoutError once expired.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;
  explicit Deadline(std::chrono::milliseconds budget) : end_(Clock::now() + budget) {}

  bool expired() const { return end_ && Clock::now() >= *end_; }
  void check() const {
    if (expired()) throw TimeoutError("time limit exceeded");
  }

 private:
  std::optional<Clock::time_point> end_;
};

}  // namespace uaq
