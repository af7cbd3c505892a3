#include "driftbench/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <tuple>

namespace driftbench {

namespace {

constexpr std::size_t kDefaultReplications = 20;
constexpr TimeStep kSquarePeriod = 200;
constexpr TimeStep kSquareLength = 4000;
constexpr double kPm25Threshold = 75.0;
constexpr double kPowerThreshold = 0.5;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::gap: return "gap";
    case ExperimentKind::shifts: return "shifts";
    case ExperimentKind::seglen: return "seglen";
    case ExperimentKind::experts: return "experts";
    case ExperimentKind::scaled_n: return "scaledN";
    case ExperimentKind::scaled_delta: return "scaledDelta";
    case ExperimentKind::scaled_both: return "scaledBoth";
    case ExperimentKind::replay: return "replay";
    case ExperimentKind::bench: return "bench";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto k : {ExperimentKind::gap, ExperimentKind::shifts, ExperimentKind::seglen, ExperimentKind::experts,
                 ExperimentKind::scaled_n, ExperimentKind::scaled_delta, ExperimentKind::scaled_both,
                 ExperimentKind::replay, ExperimentKind::bench}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown experiment kind '" + std::string(name) + "'");
}

bool is_synthetic(ExperimentKind kind) { return kind != ExperimentKind::replay && kind != ExperimentKind::bench; }

DatasetSpec parse_dataset(std::string_view text) {
  DatasetSpec d;
  const auto colon = text.find(':');
  d.name = std::string(text.substr(0, colon));
  if (colon != std::string_view::npos) d.path = std::string(text.substr(colon + 1));
  if (d.name != "square" && d.name != "pm25" && d.name != "power" && d.name != "csv" && d.name != "rewards") {
    throw std::invalid_argument("unknown dataset '" + d.name + "' (expected square, pm25, power, csv:PATH or rewards:PATH)");
  }
  if (d.name != "square" && d.path.empty()) throw std::invalid_argument("dataset '" + d.name + "' needs a file path");
  return d;
}

std::size_t ExperimentConfig::effective_replications() const {
  if (replications) return *replications;
  return kind == ExperimentKind::replay ? 1 : kDefaultReplications;
}

bool ExperimentConfig::effective_timing() const { return timing.value_or(kind == ExperimentKind::bench); }

void ExperimentConfig::validate() const {
  if (policies.empty()) throw std::invalid_argument("at least one policy is required");
  if (effective_replications() < 1) throw std::invalid_argument("replications must be >= 1");
  for (std::size_t i = 0; i < policies.size(); ++i) {
    for (std::size_t j = i + 1; j < policies.size(); ++j) {
      if (policies[i] == policies[j]) throw std::invalid_argument("policy listed twice");
    }
  }
  for (auto t : bench_horizons) {
    if (t < 2) throw std::invalid_argument("bench horizons must be >= 2");
  }
}

void apply_config_json(const nlohmann::json& doc, ExperimentConfig& cfg) {
  if (!doc.is_object()) throw std::invalid_argument("config file must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "kind") {
      cfg.kind = parse_experiment_kind(value.get<std::string>());
    } else if (key == "policies") {
      cfg.policies.clear();
      for (const auto& p : value) cfg.policies.push_back(parse_policy_kind(p.get<std::string>()));
    } else if (key == "reps") {
      cfg.replications = value.get<std::size_t>();
    } else if (key == "seed") {
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "anh_mode") {
      cfg.anh_mode = parse_anh_mode(value.get<std::string>());
    } else if (key == "gaps") {
      cfg.grid.gaps = value.get<std::vector<double>>();
    } else if (key == "shifts") {
      cfg.grid.shifts = value.get<std::vector<std::int64_t>>();
    } else if (key == "seglens") {
      cfg.grid.seglens = value.get<std::vector<std::int64_t>>();
    } else if (key == "experts") {
      cfg.grid.experts = value.get<std::vector<std::int64_t>>();
    } else if (key == "horizons") {
      cfg.grid.horizons = value.get<std::vector<std::int64_t>>();
      cfg.bench_horizons = cfg.grid.horizons;
    } else if (key == "dataset") {
      cfg.dataset = parse_dataset(value.get<std::string>());
    } else if (key == "threshold") {
      cfg.threshold = value.get<double>();
    } else if (key == "column") {
      cfg.column = value.get<std::string>();
    } else if (key == "timing") {
      cfg.timing = value.get<bool>();
    } else if (key == "jobs") {
      cfg.jobs = value.get<std::size_t>();
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
}

// ---------------------------------------------------------------------------
// Synthetic replications

std::vector<SweepPoint> experiment_points(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::gap: return synthetic_sweep_specs(SweepKind::gap, cfg.grid);
    case ExperimentKind::shifts: return synthetic_sweep_specs(SweepKind::shifts, cfg.grid);
    case ExperimentKind::seglen: return synthetic_sweep_specs(SweepKind::seglen, cfg.grid);
    case ExperimentKind::experts: return synthetic_sweep_specs(SweepKind::experts, cfg.grid);
    case ExperimentKind::scaled_n: return synthetic_sweep_specs(SweepKind::scaled_n, cfg.grid);
    case ExperimentKind::scaled_delta: return synthetic_sweep_specs(SweepKind::scaled_delta, cfg.grid);
    case ExperimentKind::scaled_both: return synthetic_sweep_specs(SweepKind::scaled_both, cfg.grid);
    case ExperimentKind::bench: {
      std::vector<SweepPoint> points;
      std::vector<std::int64_t> horizons = cfg.bench_horizons;
      if (horizons.empty()) horizons = {10, 100, 1000, 10000, 100000};
      // Two segments with the 0.7 / 0.5 means swapped at the midpoint.
      for (auto t : horizons) {
        const TimeStep first = t / 2;
        std::vector<Segment> segs{{first, {0.7, 0.5}}, {t - first, {0.5, 0.7}}};
        points.push_back({double(t), SegmentedBernoulliSpec(std::move(segs))});
      }
      return points;
    }
    case ExperimentKind::replay: break;
  }
  throw std::invalid_argument("replay experiments have no synthetic points");
}

ReplicationOutcome run_replication(const SweepPoint& point, const ExperimentConfig& cfg, std::size_t rep,
                                   bool keep_traces) {
  const std::uint64_t seed = cfg.seed + rep;
  auto param_rng = make_rng(seed, Stream::parameters);
  const SegmentedBernoulliSpec spec = point.spec.realize(param_rng);
  const SegmentTruth truth = segment_truth(spec);

  const auto env_start = std::chrono::steady_clock::now();
  auto env_rng = make_rng(seed, Stream::environment);
  const std::vector<double> rewards = bernoulli_rewards(spec, env_rng);

  ReplicationOutcome out;
  out.env_seconds = seconds_since(env_start);
  for (PolicyKind kind : cfg.policies) {
    auto policy = make_policy(kind, spec.experts(), seed, cfg.anh_mode);
    RunTrace trace = run_policy(*policy, rewards, spec.experts());
    trace.seed = seed;
    trace.total_seconds = trace.policy_seconds + out.env_seconds;
    out.regret.push_back(realized_regret(trace, truth));
    out.reward.push_back(total_reward(trace));
    out.policy_seconds.push_back(trace.policy_seconds);
    out.final_updates.push_back(trace.updates.back());
    std::uint64_t total = 0;
    for (auto u : trace.updates) total += u;
    out.total_updates.push_back(total);
    if (keep_traces) out.traces.push_back(std::move(trace));
  }
  return out;
}

std::vector<ReplicationOutcome> run_replications(const std::vector<SweepPoint>& points, const ExperimentConfig& cfg,
                                                 std::size_t jobs, bool keep_traces) {
  const std::size_t reps = cfg.effective_replications();
  const auto units = static_cast<std::int64_t>(points.size() * reps);
  std::vector<ReplicationOutcome> out(static_cast<std::size_t>(units));
  const int threads = jobs == 0 ? omp_get_max_threads() : static_cast<int>(jobs);

  // Exceptions must not escape an OpenMP region; keep the first one and rethrow.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t u = 0; u < units; ++u) {
    try {
      const auto unit = static_cast<std::size_t>(u);
      out[unit] = run_replication(points[unit / reps], cfg, unit % reps, keep_traces);
    } catch (...) {
#pragma omp critical(driftbench_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<ReplicationOutcome> run_replications_serial(const std::vector<SweepPoint>& points,
                                                        const ExperimentConfig& cfg, bool keep_traces) {
  const std::size_t reps = cfg.effective_replications();
  std::vector<ReplicationOutcome> out;
  out.reserve(points.size() * reps);
  for (const auto& point : points) {
    for (std::size_t rep = 0; rep < reps; ++rep) out.push_back(run_replication(point, cfg, rep, keep_traces));
  }
  return out;
}

namespace {

ResultRow make_row(const ExperimentConfig& cfg, double param, PolicyKind policy, std::string metric,
                   std::span<const double> values) {
  const auto stats = aggregate(values);
  ResultRow row;
  row.kind = std::string(to_string(cfg.kind));
  row.param = param;
  row.policy = std::string(to_string(policy));
  row.metric = std::move(metric);
  row.mean = stats.mean;
  row.std = stats.std;
  row.n = stats.n;
  row.seed = cfg.seed;
  return row;
}

std::vector<ResultRow> synthetic_rows(const ExperimentConfig& cfg) {
  const auto points = experiment_points(cfg);
  const std::size_t reps = cfg.effective_replications();
  const bool timing = cfg.effective_timing();
  // Wall-clock figures are only meaningful without concurrent replications.
  const std::size_t jobs = timing ? 1 : cfg.jobs;
  const auto outcomes = run_replications(points, cfg, jobs);

  std::vector<ResultRow> rows;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const double param = points[p].value;
    const auto horizon = static_cast<double>(points[p].spec.horizon());
    for (std::size_t i = 0; i < cfg.policies.size(); ++i) {
      std::vector<double> regret, reward, policy_s, total_s, final_ops, total_ops;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const auto& o = outcomes[p * reps + rep];
        regret.push_back(o.regret[i]);
        reward.push_back(o.reward[i]);
        policy_s.push_back(o.policy_seconds[i]);
        total_s.push_back(o.policy_seconds[i] + o.env_seconds);
        final_ops.push_back(static_cast<double>(o.final_updates[i]));
        total_ops.push_back(static_cast<double>(o.total_updates[i]));
      }
      std::vector<ResultRow> point_rows;
      point_rows.push_back(make_row(cfg, param, cfg.policies[i], "regret", regret));
      point_rows.push_back(make_row(cfg, param, cfg.policies[i], "total_reward", reward));
      if (cfg.kind == ExperimentKind::bench) {
        point_rows.push_back(make_row(cfg, param, cfg.policies[i], "updates_final_round", final_ops));
        point_rows.push_back(make_row(cfg, param, cfg.policies[i], "updates_total", total_ops));
        if (timing) {
          std::vector<double> per_round;
          for (double s : policy_s) per_round.push_back(s / horizon);
          point_rows.push_back(make_row(cfg, param, cfg.policies[i], "seconds_policy", policy_s));
          point_rows.push_back(make_row(cfg, param, cfg.policies[i], "seconds_total", total_s));
          point_rows.push_back(make_row(cfg, param, cfg.policies[i], "seconds_per_round", per_round));
        }
      }
      if (timing) {
        const double mean_policy = aggregate(policy_s).mean;
        const double mean_total = aggregate(total_s).mean;
        for (auto& row : point_rows) {
          row.runtime_policy = mean_policy;
          row.runtime_total = mean_total;
        }
      }
      rows.insert(rows.end(), point_rows.begin(), point_rows.end());
    }
  }
  return rows;
}

std::vector<double> square_wave() {
  std::vector<double> series(static_cast<std::size_t>(kSquareLength));
  for (TimeStep i = 0; i < kSquareLength; ++i) series[static_cast<std::size_t>(i)] = (i % kSquarePeriod) < kSquarePeriod / 2 ? 1.0 : 0.0;
  return series;
}

std::vector<double> flatten(const std::vector<RewardVector>& rows) {
  std::vector<double> out;
  out.reserve(rows.size() * (rows.empty() ? 0 : rows.front().size()));
  for (const auto& r : rows) out.insert(out.end(), r.values().begin(), r.values().end());
  return out;
}

std::vector<std::vector<double>> read_reward_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    bool numeric = true;
    for (const auto& field : split_fields(line, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
        if (field.find_first_not_of(" \t\r", used) != std::string::npos) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (line_no == 1 && rows.empty()) continue;  // header
      throw std::invalid_argument(path.string() + ": line " + std::to_string(line_no) + " is not numeric");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::vector<double> load_replay_rewards(const ExperimentConfig& cfg, std::size_t& experts, ReplayResult* info) {
  const DatasetSpec& ds = cfg.dataset;
  if (ds.name == "rewards") {
    std::vector<RewardVector> rows;
    try {
      rows = replay_rewards(read_reward_rows(ds.path));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(ds.path.string() + ": " + e.what());
    }
    experts = rows.front().size();
    return flatten(rows);
  }

  ThresholdReplaySpec spec;
  std::size_t skipped = 0;
  if (ds.name == "square") {
    spec.series = square_wave();
    spec.threshold = cfg.threshold.value_or(0.5);
  } else {
    SeriesSource source;
    if (ds.name == "pm25") {
      source = pm25_preset(ds.path);
    } else if (ds.name == "power") {
      source = power_preset(ds.path);
    } else {
      if (cfg.column.empty()) throw std::invalid_argument("csv datasets need --column");
      source.path = ds.path;
    }
    if (!cfg.column.empty()) {
      source.column = cfg.column;
      if (std::all_of(cfg.column.begin(), cfg.column.end(), [](unsigned char c) { return std::isdigit(c); })) {
        source.column_index = std::stoul(cfg.column);
      }
    }
    auto loaded = load_series(source);
    skipped = loaded.skipped;
    spec.series = std::move(loaded.values);
    if (cfg.threshold) {
      spec.threshold = *cfg.threshold;
    } else if (ds.name == "pm25") {
      const double median = rounded_median(spec.series);
      if (median != kPm25Threshold) {
        std::cerr << "driftbench: rounded median of " << ds.path.string() << " is " << median
                  << ", using the preset threshold " << kPm25Threshold << "\n";
      }
      spec.threshold = kPm25Threshold;
    } else if (ds.name == "power") {
      spec.threshold = kPowerThreshold;
    } else {
      spec.threshold = rounded_median(spec.series);
    }
  }
  if (info) {
    info->threshold = spec.threshold;
    info->skipped = skipped;
  }
  experts = 2;
  return flatten(threshold_rewards(spec));
}

ReplayResult run_replay(const ExperimentConfig& cfg) {
  ReplayResult result;
  std::size_t experts = 0;
  const std::vector<double> rewards = load_replay_rewards(cfg, experts, &result);
  const std::size_t reps = cfg.effective_replications();
  const bool timing = cfg.effective_timing();

  // FTL is the lift baseline whether or not it was requested.
  std::vector<PolicyKind> kinds = cfg.policies;
  if (std::find(kinds.begin(), kinds.end(), PolicyKind::ftl) == kinds.end()) kinds.insert(kinds.begin(), PolicyKind::ftl);

  // rewards[kind][rep]
  std::vector<std::vector<double>> totals(kinds.size(), std::vector<double>(reps));
  std::vector<std::vector<double>> seconds(kinds.size(), std::vector<double>(reps));
  const auto units = static_cast<std::int64_t>(kinds.size() * reps);
  const int threads = timing ? 1 : (cfg.jobs == 0 ? omp_get_max_threads() : static_cast<int>(cfg.jobs));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t u = 0; u < units; ++u) {
    try {
      const auto i = static_cast<std::size_t>(u) / reps;
      const auto rep = static_cast<std::size_t>(u) % reps;
      auto policy = make_policy(kinds[i], experts, cfg.seed + rep, cfg.anh_mode);
      const RunTrace trace = run_policy(*policy, rewards, experts);
      totals[i][rep] = total_reward(trace);
      seconds[i][rep] = trace.policy_seconds;
    } catch (...) {
#pragma omp critical(driftbench_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  const std::size_t ftl = static_cast<std::size_t>(std::find(kinds.begin(), kinds.end(), PolicyKind::ftl) - kinds.begin());
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    const bool requested = std::find(cfg.policies.begin(), cfg.policies.end(), kinds[i]) != cfg.policies.end();
    if (!requested) continue;
    std::vector<ResultRow> rows;
    rows.push_back(make_row(cfg, result.threshold, kinds[i], "total_reward", totals[i]));
    if (kinds[i] != PolicyKind::ftl) {
      std::vector<double> lift;
      for (std::size_t rep = 0; rep < reps; ++rep) lift.push_back(relative_lift(totals[i][rep], totals[ftl][rep]));
      rows.push_back(make_row(cfg, result.threshold, kinds[i], "lift_pct", lift));
    }
    if (timing) {
      for (auto& row : rows) row.runtime_policy = row.runtime_total = aggregate(seconds[i]).mean;
    }
    result.rows.insert(result.rows.end(), rows.begin(), rows.end());
  }
  sort_rows(result.rows);
  if (experts == 2) result.reward_diff = cumulative_reward_diff(rewards, 2);
  return result;
}

void sort_rows(std::vector<ResultRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.param, a.policy, a.metric) < std::tie(b.param, b.policy, b.metric);
  });
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.kind == ExperimentKind::replay) return run_replay(cfg).rows;
  auto rows = synthetic_rows(cfg);
  sort_rows(rows);
  return rows;
}

}  // namespace driftbench
