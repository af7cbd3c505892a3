#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "driftbench/dyadic.hpp"
#include "driftbench/policies.hpp"
#include "driftbench/rng.hpp"

namespace driftbench {

struct Segment {
  TimeStep length = 0;
  std::vector<double> means;  // Bernoulli parameter per expert
};

/// Piecewise-stationary Bernoulli environment. Segment i covers (tau_{i-1}, tau_i].
///
/// When `uniform_params` is set, the stored means are placeholders and
/// `realize` draws fresh means uniformly on [0, 1) for every segment.
class SegmentedBernoulliSpec {
 public:
  SegmentedBernoulliSpec(std::vector<Segment> segments, bool uniform_params = false);

  std::span<const Segment> segments() const { return segments_; }
  std::size_t experts() const { return experts_; }
  TimeStep horizon() const { return boundaries_.back(); }
  bool uniform_params() const { return uniform_params_; }
  /// 0 = tau_0 < tau_1 < ... < tau_N = horizon.
  std::span<const TimeStep> boundaries() const { return boundaries_; }
  /// Zero-based index of the unique segment with tau_{i-1} < t <= tau_i.
  std::size_t segment_of(TimeStep t) const;

  /// Same lengths with means drawn from `rng` if `uniform_params`, otherwise a copy.
  SegmentedBernoulliSpec realize(Rng& rng) const;

 private:
  std::vector<Segment> segments_;
  std::vector<TimeStep> boundaries_;
  std::size_t experts_ = 0;
  bool uniform_params_ = false;
};

/// Best expert and reward gap per segment. Gap ties resolve to the lowest index.
struct SegmentTruth {
  std::vector<std::size_t> best_expert;
  std::vector<double> gap;
  std::vector<TimeStep> boundaries;
  double min_gap = 0.0;

  std::size_t best_at(TimeStep t) const;
};

SegmentTruth segment_truth(const SegmentedBernoulliSpec& spec);

/// Per-expert independent Bernoulli draw for round t.
RewardVector bernoulli_step(const SegmentedBernoulliSpec& spec, TimeStep t, Rng& rng);

/// Row-major T x K reward matrix, drawn round by round with bernoulli_step semantics.
std::vector<double> bernoulli_rewards(const SegmentedBernoulliSpec& spec, Rng& rng);

struct ThresholdReplaySpec {
  std::vector<double> series;
  double threshold = 0.0;
};

/// Expert 0 predicts "above" (value > threshold), expert 1 predicts "at or below".
std::vector<RewardVector> threshold_rewards(const ThresholdReplaySpec& spec);

/// Validates pre-normalized reward rows; errors name the 1-based row.
std::vector<RewardVector> replay_rewards(const std::vector<std::vector<double>>& rows);

enum class SweepKind { gap, shifts, seglen, experts, scaled_n, scaled_delta, scaled_both };

std::string_view to_string(SweepKind kind);
SweepKind parse_sweep_kind(std::string_view name);

/// One configuration point of a synthetic sweep.
struct SweepPoint {
  double value = 0.0;  // the swept parameter (gap, N, segment length, K or T)
  SegmentedBernoulliSpec spec;
};

/// Grid overrides; an empty vector selects the default grid for that sweep.
struct SweepGrid {
  std::vector<double> gaps;               // default {0.06, 0.17, 0.28, 0.39, 0.5}
  std::vector<std::int64_t> shifts;       // default {2, 4, 8, 16, 32}
  std::vector<std::int64_t> seglens;      // default {10, 100, 1000, 10000}
  std::vector<std::int64_t> experts;      // default {2, 4, 8, 16, 32}
  std::vector<std::int64_t> horizons;     // scaled sweeps; default {100, 400, 1600, 6400, 25600}
  TimeStep segment_length = 800;          // gap, shifts and experts sweeps
};

std::vector<SweepPoint> synthetic_sweep_specs(SweepKind kind, const SweepGrid& grid = {});

/// `segments` near-equal segments summing to `total`, means (0.5 + gap/2, 0.5 - gap/2) with the
/// better expert alternating between segments.
SegmentedBernoulliSpec alternating_spec(std::size_t segments, TimeStep total, double gap);

}  // namespace driftbench
