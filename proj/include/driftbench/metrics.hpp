#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "driftbench/envs.hpp"
#include "driftbench/policies.hpp"

namespace driftbench {

/// Round-by-round record of one policy run.
struct RunTrace {
  std::size_t experts = 0;
  std::vector<std::size_t> chosen;      // x_t
  std::vector<double> rewards;          // row-major T x K
  std::vector<double> obtained;         // r_t(x_t), or the expected reward in fractional mode
  std::vector<std::uint64_t> updates;   // accumulator updates per round
  PolicyKind policy = PolicyKind::ftl;
  bool fractional = false;
  std::uint64_t seed = 0;
  double policy_seconds = 0.0;
  double total_seconds = 0.0;

  std::size_t rounds() const { return chosen.size(); }
  std::span<const double> rewards_at(std::size_t round_index) const {
    return std::span<const double>(rewards).subspan(round_index * experts, experts);
  }
  bool same_decisions(const RunTrace& other) const {
    return experts == other.experts && chosen == other.chosen && rewards == other.rewards &&
           obtained == other.obtained && updates == other.updates;
  }
};

/// Runs `policy` over a row-major T x K reward matrix. Wall time of the loop goes to policy_seconds.
RunTrace run_policy(Policy& policy, std::span<const double> rewards, std::size_t experts);

struct ReplicationStats {
  double mean = 0.0;
  double std = 0.0;  // sample (n - 1) convention, 0 when n == 1
  std::size_t n = 0;
};

/// Sum over rounds of r_t(k_i*) - r_t(x_t), k_i* the best expert of the segment holding t.
double realized_regret(const RunTrace& trace, const SegmentTruth& truth);
/// Sum over rounds of r_t(k_i*).
double oracle_reward(const RunTrace& trace, const SegmentTruth& truth);
double total_reward(const RunTrace& trace);
/// (candidate - baseline) / baseline in percent.
double relative_lift(double candidate, double baseline);
/// Prefix sums of r_t(1) - r_t(2); two experts only.
std::vector<double> cumulative_reward_diff(std::span<const RewardVector> rewards);
std::vector<double> cumulative_reward_diff(std::span<const double> rewards, std::size_t experts);
ReplicationStats aggregate(std::span<const double> values);
/// (t, accumulator updates) per round, t starting at 1.
std::vector<std::pair<TimeStep, std::uint64_t>> complexity_profile(const RunTrace& trace);

}  // namespace driftbench
