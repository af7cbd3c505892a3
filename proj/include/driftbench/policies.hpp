#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "driftbench/dyadic.hpp"
#include "driftbench/rng.hpp"

namespace driftbench {

/// Full-information reward vector for K >= 2 experts, every entry in [0, 1].
/// Experts are indexed from 0 in code.
class RewardVector {
 public:
  explicit RewardVector(std::vector<double> rewards);

  std::size_t size() const { return rewards_.size(); }
  double operator[](std::size_t k) const { return rewards_[k]; }
  std::span<const double> values() const { return rewards_; }

  bool operator==(const RewardVector&) const = default;

 private:
  std::vector<double> rewards_;
};

/// Throws std::invalid_argument unless `rewards` has at least two entries, all in [0, 1].
void validate_rewards(std::span<const double> rewards);

struct Decision {
  TimeStep round = 0;
  std::size_t expert = 0;
  std::optional<DyadicInterval> interval;    // FTBI only
  std::optional<std::vector<double>> distribution;  // ANH only
};

enum class PolicyKind { ftl, ftbi, anh };
enum class AnhMode { sampled, fractional };

std::string_view to_string(PolicyKind kind);
PolicyKind parse_policy_kind(std::string_view name);
std::string_view to_string(AnhMode mode);
AnhMode parse_anh_mode(std::string_view name);

/// Common round protocol: choose() then update() once per round, strictly alternating.
class Policy {
 public:
  explicit Policy(std::size_t experts);
  virtual ~Policy() = default;

  Decision choose();
  void update(std::span<const double> rewards, const Decision& decision);
  void update(const RewardVector& rewards, const Decision& decision) { update(rewards.values(), decision); }

  /// The round the next choose() will act on.
  TimeStep round() const { return round_; }
  std::size_t experts() const { return experts_; }
  /// Accumulator updates performed by the most recent update().
  std::uint64_t last_update_ops() const { return last_ops_; }

  virtual PolicyKind kind() const = 0;
  /// True when the policy accrues the distribution-weighted reward instead of a sampled action's.
  virtual bool fractional() const { return false; }
  /// Reward the agent is credited with for `decision`.
  double obtained_reward(std::span<const double> rewards, const Decision& decision) const;

 protected:
  bool same_protocol_state(const Policy& other) const {
    return experts_ == other.experts_ && round_ == other.round_ && awaiting_update_ == other.awaiting_update_;
  }

 private:
  virtual Decision do_choose() = 0;
  virtual std::uint64_t do_update(std::span<const double> rewards, const Decision& decision) = 0;

  std::size_t experts_;
  TimeStep round_ = 1;
  bool awaiting_update_ = false;
  std::uint64_t last_ops_ = 0;
};

/// Follow-The-Leader on cumulative rewards; ties go to the lowest index.
class FtlPolicy final : public Policy {
 public:
  explicit FtlPolicy(std::size_t experts);

  PolicyKind kind() const override { return PolicyKind::ftl; }
  std::span<const double> weights() const { return weights_; }

  bool operator==(const FtlPolicy& other) const {
    return same_protocol_state(other) && weights_ == other.weights_;
  }

 private:
  Decision do_choose() override;
  std::uint64_t do_update(std::span<const double> rewards, const Decision& decision) override;

  std::vector<double> weights_;
};

/// Follow-The-Best-Interval.
///
/// One FTL instance per active dyadic interval, keyed by level. Each instance
/// accumulates r_t(k) - r_t(x_t) from its interval's first step, so instances of
/// different lengths share a scale. The policy plays the (expert, interval) pair
/// with the largest weight, preferring longer intervals and then lower expert
/// indices on ties. Slots are created when their interval becomes active and
/// retired once the round reaches the interval's last step, giving O(K log t)
/// memory and K * (floor(log2 t) + 1) accumulator updates per round.
class FtbiPolicy final : public Policy {
 public:
  explicit FtbiPolicy(std::size_t experts);

  PolicyKind kind() const override { return PolicyKind::ftbi; }

  /// Intervals with a live slot, ordered by level.
  std::vector<DyadicInterval> live_intervals() const;
  /// Weights of the live slot for `interval`; empty if it has none.
  std::span<const double> slot_weights(const DyadicInterval& interval) const;

  bool operator==(const FtbiPolicy& other) const {
    return same_protocol_state(other) && slot_index_ == other.slot_index_ && weights_ == other.weights_;
  }

 private:
  Decision do_choose() override;
  std::uint64_t do_update(std::span<const double> rewards, const Decision& decision) override;

  // slot_index_[level] is the index of the live interval at that level, 0 when retired.
  std::vector<std::int64_t> slot_index_;
  // Row-major [level][expert].
  std::vector<double> weights_;
};

/// ANH weight w(R, C) = (Phi(R + 1, C + 1) - Phi(R - 1, C + 1)) / 2 with Phi(R, C) = exp([R]_+^2 / (3C)).
double anh_potential(double regret, double abs_regret);
/// log of anh_potential, -infinity when the weight is zero. Stays finite where the direct form overflows.
double anh_log_potential(double regret, double abs_regret);
/// Retention horizon for a sleeping expert born at `birth` = r * 2^j with r odd: 2^(j+2) + 1 rounds.
TimeStep anh_lifetime(TimeStep birth);
/// Normalizes non-negative per-arm masses to a distribution; uniform when the total is zero.
std::vector<double> normalize_mass(std::span<const double> mass);

struct SleepingExpert {
  TimeStep birth = 0;
  std::size_t arm = 0;
  double regret = 0.0;      // R
  double abs_regret = 0.0;  // C
  TimeStep lifetime = 0;

  bool alive_at(TimeStep t) const { return t >= birth && t <= birth + lifetime; }
  bool operator==(const SleepingExpert&) const = default;
};

/// AdaNormalHedge over sleeping experts (birth time, arm), with a uniform prior over
/// the alive pairs and streaming pruning of birth times so that O(log t) pairs per
/// arm stay alive.
class AnhPolicy final : public Policy {
 public:
  AnhPolicy(std::size_t experts, std::uint64_t seed, AnhMode mode = AnhMode::sampled);

  PolicyKind kind() const override { return PolicyKind::anh; }
  bool fractional() const override { return mode_ == AnhMode::fractional; }
  AnhMode mode() const { return mode_; }
  std::span<const SleepingExpert> sleeping_experts() const { return sleeping_; }

  bool operator==(const AnhPolicy& other) const {
    return same_protocol_state(other) && mode_ == other.mode_ && sleeping_ == other.sleeping_ && rng_ == other.rng_;
  }

 private:
  Decision do_choose() override;
  std::uint64_t do_update(std::span<const double> rewards, const Decision& decision) override;
  void add_newborns(TimeStep birth);

  AnhMode mode_;
  Rng rng_;
  std::vector<SleepingExpert> sleeping_;
  std::vector<double> log_weights_;  // scratch
};

/// Fresh policy at round 1. Rejects fewer than two experts.
std::unique_ptr<Policy> make_policy(PolicyKind kind, std::size_t experts, std::uint64_t seed,
                                    AnhMode anh_mode = AnhMode::sampled);

}  // namespace driftbench
