#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace driftbench {

/// Time steps are 1-based throughout.
using TimeStep = std::int64_t;

/// One interval of the nested dyadic system: [index * 2^level, (index + 1) * 2^level - 1].
/// Index 0 is excluded so that only finitely many intervals contain any given step.
class DyadicInterval {
 public:
  DyadicInterval(int level, std::int64_t index);

  int level() const { return level_; }
  std::int64_t index() const { return index_; }
  TimeStep length() const { return TimeStep{1} << level_; }
  TimeStep first() const { return index_ << level_; }
  TimeStep last() const { return first() + length() - 1; }
  bool contains(TimeStep t) const { return t >= first() && t <= last(); }

  bool operator==(const DyadicInterval&) const = default;

 private:
  int level_;
  std::int64_t index_;
};

/// Closed range [first, last] of time steps.
class TimeRange {
 public:
  TimeRange(TimeStep first, TimeStep last);

  TimeStep first() const { return first_; }
  TimeStep last() const { return last_; }
  TimeStep length() const { return last_ - first_ + 1; }

  bool operator==(const TimeRange&) const = default;

 private:
  TimeStep first_;
  TimeStep last_;
};

/// floor(log2(t)) for t >= 1.
int floor_log2(TimeStep t);

/// All dyadic intervals containing t, one per level, ordered by increasing level.
std::vector<DyadicInterval> active_set(TimeStep t);

/// Size of active_set(t) without materializing it.
inline std::size_t active_count(TimeStep t) { return static_cast<std::size_t>(floor_log2(t)) + 1; }

/// Canonical greedy partition of `range` into dyadic intervals: at each cursor
/// position emit the largest aligned block that still fits.
std::vector<DyadicInterval> geometric_cover(const TimeRange& range);

/// Concatenated covers of the segments delimited by boundaries 0 = b0 < b1 < ... < bN = horizon.
std::vector<DyadicInterval> cover_of_segments(std::span<const TimeStep> boundaries, TimeStep horizon);

}  // namespace driftbench
