#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>

namespace rpe {

using Clock = std::chrono::steady_clock;

/// Raised cooperatively when a wall-clock budget runs out mid-computation.
class TimeoutError : public std::runtime_error {
 public:
  TimeoutError() : std::runtime_error("wall-clock budget exhausted") {}
};

/// Optional wall-clock deadline, checked between units of work.
struct Deadline {
  std::optional<Clock::time_point> at;

  static Deadline after(double seconds) {
    return Deadline{Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds))};
  }
  bool expired() const { return at && Clock::now() >= *at; }
  void check() const {
    if (expired()) throw TimeoutError();
  }
};

}  // namespace rpe
