#include "driftbench/envs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace driftbench {

SegmentedBernoulliSpec::SegmentedBernoulliSpec(std::vector<Segment> segments, bool uniform_params)
    : segments_(std::move(segments)), uniform_params_(uniform_params) {
  if (segments_.empty()) throw std::invalid_argument("environment needs at least one segment");
  experts_ = segments_.front().means.size();
  if (experts_ < 2) throw std::invalid_argument("environment needs at least two experts");
  boundaries_.reserve(segments_.size() + 1);
  boundaries_.push_back(0);
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (s.length < 1) throw std::invalid_argument("segment " + std::to_string(i + 1) + " has length < 1");
    if (s.means.size() != experts_) {
      throw std::invalid_argument("segment " + std::to_string(i + 1) + " has a different number of experts");
    }
    for (double p : s.means) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("segment " + std::to_string(i + 1) + " has a mean outside [0, 1]");
      }
    }
    boundaries_.push_back(boundaries_.back() + s.length);
  }
}

std::size_t SegmentedBernoulliSpec::segment_of(TimeStep t) const {
  if (t < 1 || t > horizon()) {
    throw std::out_of_range("round " + std::to_string(t) + " outside [1, " + std::to_string(horizon()) + "]");
  }
  // First boundary >= t is tau_i for the segment i (1-based) holding t.
  const auto it = std::lower_bound(boundaries_.begin() + 1, boundaries_.end(), t);
  return static_cast<std::size_t>(it - boundaries_.begin()) - 1;
}

SegmentedBernoulliSpec SegmentedBernoulliSpec::realize(Rng& rng) const {
  if (!uniform_params_) return *this;
  std::vector<Segment> drawn = segments_;
  for (auto& s : drawn) {
    for (auto& p : s.means) p = uniform01(rng);
  }
  return SegmentedBernoulliSpec(std::move(drawn), false);
}

std::size_t SegmentTruth::best_at(TimeStep t) const {
  const auto it = std::lower_bound(boundaries.begin() + 1, boundaries.end(), t);
  return best_expert.at(static_cast<std::size_t>(it - boundaries.begin()) - 1);
}

SegmentTruth segment_truth(const SegmentedBernoulliSpec& spec) {
  SegmentTruth truth;
  truth.boundaries.assign(spec.boundaries().begin(), spec.boundaries().end());
  truth.min_gap = 1.0;
  for (const auto& s : spec.segments()) {
    const auto best = static_cast<std::size_t>(std::max_element(s.means.begin(), s.means.end()) - s.means.begin());
    double runner_up = -1.0;
    for (std::size_t k = 0; k < s.means.size(); ++k) {
      if (k != best) runner_up = std::max(runner_up, s.means[k]);
    }
    truth.best_expert.push_back(best);
    truth.gap.push_back(s.means[best] - runner_up);
    truth.min_gap = std::min(truth.min_gap, truth.gap.back());
  }
  return truth;
}

RewardVector bernoulli_step(const SegmentedBernoulliSpec& spec, TimeStep t, Rng& rng) {
  const auto& means = spec.segments()[spec.segment_of(t)].means;
  std::vector<double> r(means.size());
  for (std::size_t k = 0; k < means.size(); ++k) r[k] = uniform01(rng) < means[k] ? 1.0 : 0.0;
  return RewardVector(std::move(r));
}

std::vector<double> bernoulli_rewards(const SegmentedBernoulliSpec& spec, Rng& rng) {
  const std::size_t k_count = spec.experts();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(spec.horizon()) * k_count);
  for (const auto& s : spec.segments()) {
    for (TimeStep i = 0; i < s.length; ++i) {
      for (std::size_t k = 0; k < k_count; ++k) out.push_back(uniform01(rng) < s.means[k] ? 1.0 : 0.0);
    }
  }
  return out;
}

std::vector<RewardVector> threshold_rewards(const ThresholdReplaySpec& spec) {
  if (spec.series.empty()) throw std::invalid_argument("threshold replay needs a non-empty series");
  std::vector<RewardVector> out;
  out.reserve(spec.series.size());
  for (double v : spec.series) {
    const bool above = v > spec.threshold;
    out.emplace_back(std::vector<double>{above ? 1.0 : 0.0, above ? 0.0 : 1.0});
  }
  return out;
}

std::vector<RewardVector> replay_rewards(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("reward replay needs at least one row");
  std::vector<RewardVector> out;
  out.reserve(rows.size());
  const std::size_t k_count = rows.front().size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != k_count) {
      throw std::invalid_argument("row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                                  " entries, expected " + std::to_string(k_count));
    }
    try {
      out.emplace_back(rows[i]);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("row " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

std::string_view to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::gap: return "gap";
    case SweepKind::shifts: return "shifts";
    case SweepKind::seglen: return "seglen";
    case SweepKind::experts: return "experts";
    case SweepKind::scaled_n: return "scaledN";
    case SweepKind::scaled_delta: return "scaledDelta";
    case SweepKind::scaled_both: return "scaledBoth";
  }
  return "?";
}

SweepKind parse_sweep_kind(std::string_view name) {
  for (auto k : {SweepKind::gap, SweepKind::shifts, SweepKind::seglen, SweepKind::experts, SweepKind::scaled_n,
                 SweepKind::scaled_delta, SweepKind::scaled_both}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown sweep kind '" + std::string(name) + "'");
}

SegmentedBernoulliSpec alternating_spec(std::size_t segments, TimeStep total, double gap) {
  if (segments < 1) throw std::invalid_argument("need at least one segment");
  if (total < static_cast<TimeStep>(segments)) throw std::invalid_argument("horizon shorter than segment count");
  if (!(gap >= 0.0 && gap <= 1.0)) throw std::invalid_argument("gap must lie in [0, 1]");
  const double hi = 0.5 + gap / 2.0;
  const double lo = 0.5 - gap / 2.0;
  const auto n = static_cast<TimeStep>(segments);
  std::vector<Segment> out;
  for (TimeStep i = 0; i < n; ++i) {
    const TimeStep length = total / n + (i < total % n ? 1 : 0);
    out.push_back({length, i % 2 == 0 ? std::vector<double>{hi, lo} : std::vector<double>{lo, hi}});
  }
  return SegmentedBernoulliSpec(std::move(out));
}

namespace {

template <typename T>
std::vector<T> or_default(const std::vector<T>& given, std::vector<T> fallback) {
  return given.empty() ? std::move(fallback) : given;
}

SegmentedBernoulliSpec uniform_spec(std::size_t segments, TimeStep length, std::size_t experts) {
  std::vector<Segment> out(segments, Segment{length, std::vector<double>(experts, 0.5)});
  return SegmentedBernoulliSpec(std::move(out), true);
}

std::size_t rounded_sqrt(std::int64_t t) { return static_cast<std::size_t>(std::llround(std::sqrt(double(t)))); }

}  // namespace

std::vector<SweepPoint> synthetic_sweep_specs(SweepKind kind, const SweepGrid& grid) {
  std::vector<SweepPoint> points;
  const TimeStep len = grid.segment_length;
  switch (kind) {
    case SweepKind::gap:
      for (double gap : or_default(grid.gaps, {0.06, 0.17, 0.28, 0.39, 0.5})) {
        points.push_back({gap, alternating_spec(2, 2 * len, gap)});
      }
      break;
    case SweepKind::shifts:
      for (auto n : or_default<std::int64_t>(grid.shifts, {2, 4, 8, 16, 32})) {
        if (n < 1) throw std::invalid_argument("segment count must be >= 1");
        points.push_back({double(n), uniform_spec(static_cast<std::size_t>(n), len, 2)});
      }
      break;
    case SweepKind::seglen:
      for (auto l : or_default<std::int64_t>(grid.seglens, {10, 100, 1000, 10000})) {
        std::vector<Segment> segs{{l, {0.7, 0.5}}, {l, {0.5, 0.7}}};
        points.push_back({double(l), SegmentedBernoulliSpec(std::move(segs))});
      }
      break;
    case SweepKind::experts:
      for (auto k : or_default<std::int64_t>(grid.experts, {2, 4, 8, 16, 32})) {
        if (k < 2) throw std::invalid_argument("expert count must be >= 2");
        points.push_back({double(k), uniform_spec(2, len, static_cast<std::size_t>(k))});
      }
      break;
    case SweepKind::scaled_n:
    case SweepKind::scaled_delta:
    case SweepKind::scaled_both:
      for (auto t : or_default<std::int64_t>(grid.horizons, {100, 400, 1600, 6400, 25600})) {
        if (t < 10) throw std::invalid_argument("scaled sweeps need T >= 10");
        const std::size_t n = kind == SweepKind::scaled_delta ? 10 : rounded_sqrt(t);
        const double gap = kind == SweepKind::scaled_n ? 0.1 : 1.0 / std::sqrt(double(t));
        points.push_back({double(t), alternating_spec(n, t, gap)});
      }
      break;
  }
  return points;
}

}  // namespace driftbench
