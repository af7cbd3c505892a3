#include "driftbench/dyadic.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace driftbench {

DyadicInterval::DyadicInterval(int level, std::int64_t index) : level_(level), index_(index) {
  if (level < 0 || level > 61) throw std::invalid_argument("dyadic level out of range: " + std::to_string(level));
  if (index < 1) throw std::invalid_argument("dyadic index must be >= 1, got " + std::to_string(index));
  if (index > (std::int64_t{1} << (62 - level))) throw std::overflow_error("dyadic interval exceeds 62-bit time");
}

TimeRange::TimeRange(TimeStep first, TimeStep last) : first_(first), last_(last) {
  if (first < 1) throw std::invalid_argument("time range must start at a positive step");
  if (last < first) throw std::invalid_argument("time range has last < first");
}

int floor_log2(TimeStep t) {
  if (t < 1) throw std::invalid_argument("floor_log2 requires t >= 1");
  return std::bit_width(static_cast<std::uint64_t>(t)) - 1;
}

std::vector<DyadicInterval> active_set(TimeStep t) {
  if (t < 1) throw std::invalid_argument("active_set requires t >= 1, got " + std::to_string(t));
  const int top = floor_log2(t);
  std::vector<DyadicInterval> out;
  out.reserve(static_cast<std::size_t>(top) + 1);
  for (int n = 0; n <= top; ++n) out.emplace_back(n, t >> n);
  return out;
}

std::vector<DyadicInterval> geometric_cover(const TimeRange& range) {
  std::vector<DyadicInterval> out;
  TimeStep cursor = range.first();
  while (cursor <= range.last()) {
    // Largest power of two dividing the cursor, then shrink until the block fits.
    int level = std::countr_zero(static_cast<std::uint64_t>(cursor));
    while (cursor + (TimeStep{1} << level) - 1 > range.last()) --level;
    out.emplace_back(level, cursor >> level);
    cursor += TimeStep{1} << level;
  }
  return out;
}

std::vector<DyadicInterval> cover_of_segments(std::span<const TimeStep> boundaries, TimeStep horizon) {
  if (boundaries.size() < 2) throw std::invalid_argument("cover_of_segments needs at least two boundaries");
  if (boundaries.front() != 0) throw std::invalid_argument("first boundary must be 0");
  if (boundaries.back() != horizon) throw std::invalid_argument("last boundary must equal the horizon");
  std::vector<DyadicInterval> out;
  for (std::size_t i = 1; i < boundaries.size(); ++i) {
    if (boundaries[i] <= boundaries[i - 1]) throw std::invalid_argument("boundaries must be strictly increasing");
    auto piece = geometric_cover(TimeRange(boundaries[i - 1] + 1, boundaries[i]));
    out.insert(out.end(), piece.begin(), piece.end());
  }
  return out;
}

}  // namespace driftbench
