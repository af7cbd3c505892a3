#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "driftbench/metrics.hpp"

using namespace driftbench;

namespace {

RunTrace manual_trace(std::vector<std::vector<double>> rewards, std::vector<std::size_t> actions) {
  RunTrace t;
  t.experts = rewards.front().size();
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    t.rewards.insert(t.rewards.end(), rewards[i].begin(), rewards[i].end());
    t.chosen.push_back(actions[i]);
    t.obtained.push_back(rewards[i][actions[i]]);
    t.updates.push_back(t.experts);
  }
  return t;
}

}  // namespace

TEST_CASE("realized_regret") {
  const SegmentedBernoulliSpec one({{2, {0.9, 0.1}}});
  const auto truth = segment_truth(one);
  CHECK(realized_regret(manual_trace({{1, 0}, {1, 0}}, {1, 0}), truth) == 1.0);
  CHECK(realized_regret(manual_trace({{1, 0}, {0, 1}}, {0, 0}), truth) == 0.0);  // k* always played

  const SegmentedBernoulliSpec swap({{2, {1.0, 0.0}}, {2, {0.0, 1.0}}});
  const auto st = segment_truth(swap);
  CHECK(realized_regret(manual_trace({{1, 0}, {1, 0}, {0, 1}, {0, 1}}, {0, 0, 1, 1}), st) == 0.0);
  CHECK(realized_regret(manual_trace({{1, 0}, {1, 0}, {0, 1}, {0, 1}}, {0, 0, 0, 0}), st) == 2.0);
  CHECK_THROWS_AS(realized_regret(manual_trace({{1, 0}}, {0}), st), std::invalid_argument);
}

TEST_CASE("regret and reward account for the oracle reward") {
  const SegmentedBernoulliSpec spec({{300, {0.6, 0.4}}, {200, {0.3, 0.5}}});
  Rng env = make_rng(9, Stream::environment);
  const auto rewards = bernoulli_rewards(spec, env);
  const auto truth = segment_truth(spec);
  for (PolicyKind kind : {PolicyKind::ftl, PolicyKind::ftbi, PolicyKind::anh}) {
    auto p = make_policy(kind, 2, 9);
    const auto trace = run_policy(*p, rewards, 2);
    // Rewards are 0/1, so every partial sum is an exact integer.
    CHECK(realized_regret(trace, truth) + total_reward(trace) == oracle_reward(trace, truth));
  }
}

TEST_CASE("total_reward") {
  RunTrace t;
  CHECK(total_reward(t) == 0.0);
  t.obtained = std::vector<double>(10, 1.0);
  CHECK(total_reward(t) == 10.0);
  t.obtained = {0.5, 0.25};
  CHECK(total_reward(t) == 0.75);
}

TEST_CASE("relative_lift") {
  CHECK(relative_lift(185, 100) == doctest::Approx(85.0));
  CHECK(relative_lift(100, 100) == 0.0);
  CHECK(relative_lift(90, 100) == doctest::Approx(-10.0));
  CHECK_THROWS_AS(relative_lift(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(relative_lift(1, -2), std::invalid_argument);
}

TEST_CASE("cumulative_reward_diff") {
  const std::vector<RewardVector> a{RewardVector({1, 0}), RewardVector({1, 0})};
  CHECK(cumulative_reward_diff(a) == std::vector<double>{1, 2});
  const std::vector<RewardVector> b{RewardVector({1, 0}), RewardVector({0, 1})};
  CHECK(cumulative_reward_diff(b) == std::vector<double>{1, 0});
  const std::vector<RewardVector> k3{RewardVector({1, 0, 0})};
  CHECK_THROWS_AS(cumulative_reward_diff(k3), std::invalid_argument);

  const auto threshold = threshold_rewards({{3, 9, 1, 8, 8, 2}, 5.0});
  const auto diff = cumulative_reward_diff(threshold);
  double prev = 0.0;
  for (double d : diff) {
    CHECK(std::abs(d - prev) == 1.0);
    prev = d;
  }
}

TEST_CASE("cumulative_reward_diff is monotone iff one expert weakly dominates") {
  const std::vector<RewardVector> dom{RewardVector({1, 0}), RewardVector({0.5, 0.5}), RewardVector({1, 0.2})};
  const auto d = cumulative_reward_diff(dom);
  CHECK(std::is_sorted(d.begin(), d.end()));
  const std::vector<RewardVector> mixed{RewardVector({1, 0}), RewardVector({0, 1})};
  const auto m = cumulative_reward_diff(mixed);
  CHECK_FALSE(std::is_sorted(m.begin(), m.end()));
}

TEST_CASE("aggregate") {
  const auto flat = aggregate(std::vector<double>{2, 2, 2});
  CHECK(flat.mean == 2.0);
  CHECK(flat.std == 0.0);
  const auto two = aggregate(std::vector<double>{1, 3});
  CHECK(two.mean == 2.0);
  CHECK(two.std == doctest::Approx(std::sqrt(2.0)));
  const auto one = aggregate(std::vector<double>{5});
  CHECK(one.std == 0.0);
  CHECK(one.n == 1);
  CHECK_THROWS_AS(aggregate(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("complexity_profile") {
  std::vector<double> rewards;
  for (int i = 0; i < 64; ++i) {
    rewards.push_back(double(i % 2));
    rewards.push_back(double((i / 3) % 2));
  }
  FtbiPolicy ftbi(2);
  const auto profile = complexity_profile(run_policy(ftbi, rewards, 2));
  CHECK(profile[0] == std::pair<TimeStep, std::uint64_t>{1, 2});
  CHECK(profile[29].second == 10);  // t = 30: K * |ACTIVE(30)| = 2 * 5
  for (const auto& [t, ops] : profile) CHECK(ops == 2 * active_count(t));

  FtlPolicy ftl(2);
  for (const auto& [t, ops] : complexity_profile(run_policy(ftl, rewards, 2))) CHECK(ops == 2);
}
