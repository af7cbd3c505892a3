#include "driftbench/policies.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace driftbench {

void validate_rewards(std::span<const double> rewards) {
  if (rewards.size() < 2) throw std::invalid_argument("reward vector needs at least two experts");
  for (std::size_t k = 0; k < rewards.size(); ++k) {
    const double r = rewards[k];
    if (!(r >= 0.0 && r <= 1.0)) {
      throw std::invalid_argument("reward " + std::to_string(r) + " for expert " + std::to_string(k + 1) +
                                  " outside [0, 1]");
    }
  }
}

RewardVector::RewardVector(std::vector<double> rewards) : rewards_(std::move(rewards)) {
  validate_rewards(rewards_);
}

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::ftl: return "ftl";
    case PolicyKind::ftbi: return "ftbi";
    case PolicyKind::anh: return "anh";
  }
  return "?";
}

PolicyKind parse_policy_kind(std::string_view name) {
  if (name == "ftl") return PolicyKind::ftl;
  if (name == "ftbi") return PolicyKind::ftbi;
  if (name == "anh") return PolicyKind::anh;
  throw std::invalid_argument("unknown policy '" + std::string(name) + "' (expected ftl, ftbi or anh)");
}

std::string_view to_string(AnhMode mode) { return mode == AnhMode::sampled ? "sampled" : "fractional"; }

AnhMode parse_anh_mode(std::string_view name) {
  if (name == "sampled") return AnhMode::sampled;
  if (name == "fractional") return AnhMode::fractional;
  throw std::invalid_argument("unknown ANH mode '" + std::string(name) + "' (expected sampled or fractional)");
}

// ---------------------------------------------------------------------------
// Policy

Policy::Policy(std::size_t experts) : experts_(experts) {
  if (experts < 2) throw std::invalid_argument("a policy needs at least two experts");
}

Decision Policy::choose() {
  if (awaiting_update_) throw std::logic_error("choose() called twice without update()");
  Decision d = do_choose();
  d.round = round_;
  awaiting_update_ = true;
  return d;
}

void Policy::update(std::span<const double> rewards, const Decision& decision) {
  if (!awaiting_update_) throw std::logic_error("update() called without a preceding choose()");
  if (decision.round != round_) throw std::logic_error("decision does not belong to the current round");
  if (rewards.size() != experts_) {
    throw std::invalid_argument("reward vector has " + std::to_string(rewards.size()) + " entries, policy expects " +
                                std::to_string(experts_));
  }
  validate_rewards(rewards);
  last_ops_ = do_update(rewards, decision);
  awaiting_update_ = false;
  ++round_;
}

double Policy::obtained_reward(std::span<const double> rewards, const Decision& decision) const {
  if (fractional() && decision.distribution) {
    double sum = 0.0;
    for (std::size_t k = 0; k < rewards.size(); ++k) sum += (*decision.distribution)[k] * rewards[k];
    return sum;
  }
  return rewards[decision.expert];
}

// ---------------------------------------------------------------------------
// FTL

FtlPolicy::FtlPolicy(std::size_t experts) : Policy(experts), weights_(experts, 0.0) {}

Decision FtlPolicy::do_choose() {
  Decision d;
  d.expert = static_cast<std::size_t>(std::max_element(weights_.begin(), weights_.end()) - weights_.begin());
  return d;
}

std::uint64_t FtlPolicy::do_update(std::span<const double> rewards, const Decision&) {
  for (std::size_t k = 0; k < weights_.size(); ++k) weights_[k] += rewards[k];
  return weights_.size();
}

// ---------------------------------------------------------------------------
// FTBI

FtbiPolicy::FtbiPolicy(std::size_t experts) : Policy(experts) {}

std::vector<DyadicInterval> FtbiPolicy::live_intervals() const {
  std::vector<DyadicInterval> out;
  for (std::size_t n = 0; n < slot_index_.size(); ++n) {
    if (slot_index_[n] != 0) out.emplace_back(static_cast<int>(n), slot_index_[n]);
  }
  return out;
}

std::span<const double> FtbiPolicy::slot_weights(const DyadicInterval& interval) const {
  const auto n = static_cast<std::size_t>(interval.level());
  if (n >= slot_index_.size() || slot_index_[n] != interval.index()) return {};
  return std::span<const double>(weights_).subspan(n * experts(), experts());
}

Decision FtbiPolicy::do_choose() {
  const TimeStep t = round();
  const std::size_t k_count = experts();
  const auto levels = active_count(t);
  if (slot_index_.size() < levels) {
    slot_index_.resize(levels, 0);
    weights_.resize(levels * k_count, 0.0);
  }
  for (std::size_t n = 0; n < levels; ++n) {
    const std::int64_t index = t >> n;
    if (slot_index_[n] != index) {
      slot_index_[n] = index;
      std::fill_n(weights_.begin() + static_cast<std::ptrdiff_t>(n * k_count), k_count, 0.0);
    }
  }

  // Scan longest interval first; strict comparison keeps the earliest maximizer.
  std::size_t best_level = levels - 1;
  std::size_t best_expert = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t n = levels; n-- > 0;) {
    const double* row = weights_.data() + n * k_count;
    for (std::size_t k = 0; k < k_count; ++k) {
      if (row[k] > best) {
        best = row[k];
        best_level = n;
        best_expert = k;
      }
    }
  }

  Decision d;
  d.expert = best_expert;
  d.interval = DyadicInterval(static_cast<int>(best_level), slot_index_[best_level]);
  return d;
}

std::uint64_t FtbiPolicy::do_update(std::span<const double> rewards, const Decision& decision) {
  const TimeStep t = round();
  const std::size_t k_count = experts();
  const auto levels = active_count(t);
  const double chosen = rewards[decision.expert];
  for (std::size_t n = 0; n < levels; ++n) {
    double* row = weights_.data() + n * k_count;
    for (std::size_t k = 0; k < k_count; ++k) row[k] += rewards[k] - chosen;
  }
  // A level-n interval ends at t exactly when 2^n divides t + 1.
  const auto next = static_cast<std::uint64_t>(t + 1);
  const auto retiring = std::min<std::size_t>(levels, static_cast<std::size_t>(std::countr_zero(next)) + 1);
  for (std::size_t n = 0; n < retiring; ++n) slot_index_[n] = 0;
  return static_cast<std::uint64_t>(levels * k_count);
}

// ---------------------------------------------------------------------------
// ANH

double anh_log_potential(double regret, double abs_regret) {
  if (abs_regret < 0.0) throw std::invalid_argument("ANH potential requires C >= 0");
  const double denom = 3.0 * (abs_regret + 1.0);
  const double hi = std::max(regret + 1.0, 0.0);
  const double lo = std::max(regret - 1.0, 0.0);
  const double a = hi * hi / denom;
  const double b = lo * lo / denom;
  if (a <= b) return -std::numeric_limits<double>::infinity();
  // log((e^a - e^b) / 2) = a + log1p(-e^(b - a)) - log 2
  return a + std::log1p(-std::exp(b - a)) - std::log(2.0);
}

double anh_potential(double regret, double abs_regret) {
  if (abs_regret < 0.0) throw std::invalid_argument("ANH potential requires C >= 0");
  const double denom = 3.0 * (abs_regret + 1.0);
  const double hi = std::max(regret + 1.0, 0.0);
  const double lo = std::max(regret - 1.0, 0.0);
  return 0.5 * (std::exp(hi * hi / denom) - std::exp(lo * lo / denom));
}

TimeStep anh_lifetime(TimeStep birth) {
  if (birth < 1) throw std::invalid_argument("birth time must be >= 1");
  const int j = std::countr_zero(static_cast<std::uint64_t>(birth));
  return (TimeStep{1} << (j + 2)) + 1;
}

std::vector<double> normalize_mass(std::span<const double> mass) {
  double total = 0.0;
  for (double m : mass) {
    if (!(m >= 0.0)) throw std::invalid_argument("mass must be non-negative");
    total += m;
  }
  std::vector<double> p(mass.size());
  if (total > 0.0) {
    for (std::size_t k = 0; k < mass.size(); ++k) p[k] = mass[k] / total;
  } else {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(mass.size()));
  }
  return p;
}

AnhPolicy::AnhPolicy(std::size_t experts, std::uint64_t seed, AnhMode mode)
    : Policy(experts), mode_(mode), rng_(make_rng(seed, Stream::policy)) {
  add_newborns(1);
}

void AnhPolicy::add_newborns(TimeStep birth) {
  const TimeStep lifetime = anh_lifetime(birth);
  for (std::size_t k = 0; k < experts(); ++k) sleeping_.push_back({birth, k, 0.0, 0.0, lifetime});
}

Decision AnhPolicy::do_choose() {
  const std::size_t k_count = experts();
  log_weights_.resize(sleeping_.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sleeping_.size(); ++i) {
    log_weights_[i] = anh_log_potential(sleeping_[i].regret, sleeping_[i].abs_regret);
    top = std::max(top, log_weights_[i]);
  }
  std::vector<double> mass(k_count, 0.0);
  if (std::isfinite(top)) {
    for (std::size_t i = 0; i < sleeping_.size(); ++i) mass[sleeping_[i].arm] += std::exp(log_weights_[i] - top);
  }
  std::vector<double> p = normalize_mass(mass);

  Decision d;
  if (mode_ == AnhMode::sampled) {
    const double u = uniform01(rng_);
    double cumulative = 0.0;
    d.expert = k_count - 1;
    for (std::size_t k = 0; k < k_count; ++k) {
      cumulative += p[k];
      if (u < cumulative) {
        d.expert = k;
        break;
      }
    }
  } else {
    d.expert = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
  }
  d.distribution = std::move(p);
  return d;
}

std::uint64_t AnhPolicy::do_update(std::span<const double> rewards, const Decision& decision) {
  if (!decision.distribution || decision.distribution->size() != experts()) {
    throw std::invalid_argument("ANH update needs the distribution from choose()");
  }
  const auto& p = *decision.distribution;
  double expected = 0.0;
  for (std::size_t k = 0; k < rewards.size(); ++k) expected += p[k] * rewards[k];

  for (auto& e : sleeping_) {
    const double g = rewards[e.arm] - expected;
    e.regret += g;
    e.abs_regret += std::abs(g);
  }
  const auto ops = static_cast<std::uint64_t>(sleeping_.size());

  const TimeStep next = round() + 1;
  std::erase_if(sleeping_, [next](const SleepingExpert& e) { return !e.alive_at(next); });
  add_newborns(next);
  return ops;
}

// ---------------------------------------------------------------------------

std::unique_ptr<Policy> make_policy(PolicyKind kind, std::size_t experts, std::uint64_t seed, AnhMode anh_mode) {
  switch (kind) {
    case PolicyKind::ftl: return std::make_unique<FtlPolicy>(experts);
    case PolicyKind::ftbi: return std::make_unique<FtbiPolicy>(experts);
    case PolicyKind::anh: return std::make_unique<AnhPolicy>(experts, seed, anh_mode);
  }
  throw std::invalid_argument("unknown policy kind");
}

}  // namespace driftbench
