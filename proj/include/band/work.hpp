#pragma once

#include <cstdint>
#include <limits>

namespace band {

/// Deterministic work accounting. Every solver charges ticks proportional to
/// the arithmetic it performs; budgets given in seconds are converted with a
/// fixed calibration constant. Control flow depends only on ticks, never on
/// the wall clock, so identical inputs always take identical decisions.
/// One tick is calibrated to roughly one microsecond of desktop compute.
class WorkMeter {
 public:
  static constexpr uint64_t kTicksPerSecond = 1'000'000;
  static constexpr uint64_t kNoLimit = std::numeric_limits<uint64_t>::max();

  void charge(uint64_t ticks) { ticks_ += ticks; }
  uint64_t ticks() const { return ticks_; }

  /// Converts a duration into an absolute tick deadline from now.
  /// Negative durations mean "no deadline".
  uint64_t deadline_after(double seconds) const {
    if (seconds < 0) return kNoLimit;
    const double t = seconds * static_cast<double>(kTicksPerSecond);
    if (t >= static_cast<double>(kNoLimit)) return kNoLimit;
    const uint64_t dt = static_cast<uint64_t>(t);
    return ticks_ > kNoLimit - dt ? kNoLimit : ticks_ + dt;
  }

  bool passed(uint64_t deadline) const { return ticks_ >= deadline; }

  double seconds() const {
    return static_cast<double>(ticks_) / static_cast<double>(kTicksPerSecond);
  }

 private:
  uint64_t ticks_ = 0;
};

}  // namespace band
