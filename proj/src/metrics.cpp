#include "driftbench/metrics.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace driftbench {

RunTrace run_policy(Policy& policy, std::span<const double> rewards, std::size_t experts) {
  if (experts != policy.experts()) throw std::invalid_argument("reward matrix and policy disagree on K");
  if (rewards.size() % experts != 0) throw std::invalid_argument("reward matrix is not T x K");
  const std::size_t rounds = rewards.size() / experts;

  RunTrace trace;
  trace.experts = experts;
  trace.policy = policy.kind();
  trace.fractional = policy.fractional();
  trace.rewards.assign(rewards.begin(), rewards.end());
  trace.chosen.resize(rounds);
  trace.obtained.resize(rounds);
  trace.updates.resize(rounds);

  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < rounds; ++i) {
    const auto r = rewards.subspan(i * experts, experts);
    const Decision d = policy.choose();
    policy.update(r, d);
    trace.chosen[i] = d.expert;
    trace.obtained[i] = policy.obtained_reward(r, d);
    trace.updates[i] = policy.last_update_ops();
  }
  trace.policy_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trace;
}

double oracle_reward(const RunTrace& trace, const SegmentTruth& truth) {
  if (truth.boundaries.empty() || static_cast<std::size_t>(truth.boundaries.back()) != trace.rounds()) {
    throw std::invalid_argument("trace length does not match the segment boundaries");
  }
  double sum = 0.0;
  std::size_t segment = 0;
  for (std::size_t i = 0; i < trace.rounds(); ++i) {
    const auto t = static_cast<TimeStep>(i + 1);
    while (t > truth.boundaries[segment + 1]) ++segment;
    sum += trace.rewards_at(i)[truth.best_expert[segment]];
  }
  return sum;
}

double realized_regret(const RunTrace& trace, const SegmentTruth& truth) {
  if (truth.boundaries.empty() || static_cast<std::size_t>(truth.boundaries.back()) != trace.rounds()) {
    throw std::invalid_argument("trace length does not match the segment boundaries");
  }
  double sum = 0.0;
  std::size_t segment = 0;
  for (std::size_t i = 0; i < trace.rounds(); ++i) {
    const auto t = static_cast<TimeStep>(i + 1);
    while (t > truth.boundaries[segment + 1]) ++segment;
    sum += trace.rewards_at(i)[truth.best_expert[segment]] - trace.obtained[i];
  }
  return sum;
}

double total_reward(const RunTrace& trace) {
  double sum = 0.0;
  for (double r : trace.obtained) sum += r;
  return sum;
}

double relative_lift(double candidate, double baseline) {
  if (!(baseline > 0.0)) throw std::invalid_argument("relative lift needs a positive baseline");
  return 100.0 * (candidate - baseline) / baseline;
}

std::vector<double> cumulative_reward_diff(std::span<const double> rewards, std::size_t experts) {
  if (experts != 2) throw std::invalid_argument("cumulative reward difference is defined for two experts");
  std::vector<double> out(rewards.size() / 2);
  double running = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    running += rewards[2 * i] - rewards[2 * i + 1];
    out[i] = running;
  }
  return out;
}

std::vector<double> cumulative_reward_diff(std::span<const RewardVector> rewards) {
  std::vector<double> out;
  out.reserve(rewards.size());
  double running = 0.0;
  for (const auto& r : rewards) {
    if (r.size() != 2) throw std::invalid_argument("cumulative reward difference is defined for two experts");
    running += r[0] - r[1];
    out.push_back(running);
  }
  return out;
}

ReplicationStats aggregate(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("cannot aggregate an empty list");
  ReplicationStats s;
  s.n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

std::vector<std::pair<TimeStep, std::uint64_t>> complexity_profile(const RunTrace& trace) {
  std::vector<std::pair<TimeStep, std::uint64_t>> out;
  out.reserve(trace.updates.size());
  for (std::size_t i = 0; i < trace.updates.size(); ++i) out.emplace_back(static_cast<TimeStep>(i + 1), trace.updates[i]);
  return out;
}

}  // namespace driftbench
