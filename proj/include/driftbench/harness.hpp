#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "driftbench/envs.hpp"
#include "driftbench/ingest.hpp"
#include "driftbench/metrics.hpp"
#include "driftbench/policies.hpp"

namespace driftbench {

enum class ExperimentKind { gap, shifts, seglen, experts, scaled_n, scaled_delta, scaled_both, replay, bench };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);
bool is_synthetic(ExperimentKind kind);

enum class OutputFormat { csv, json };

/// Dataset selector for replay runs.
///   "square"            built-in square wave (period 200, 4000 rounds, threshold 0.5)
///   "pm25[:PATH]"       Beijing PM2.5 preset, threshold = rounded median pinned to 75
///   "power[:PATH]"      household power preset, threshold 0.5
///   "csv:PATH"          generic numeric CSV; needs --column, threshold defaults to the rounded median
///   "rewards:PATH"      K reward columns per row, already in [0, 1]
struct DatasetSpec {
  std::string name = "square";
  std::filesystem::path path;
};
DatasetSpec parse_dataset(std::string_view text);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::gap;
  std::vector<PolicyKind> policies{PolicyKind::ftl, PolicyKind::ftbi, PolicyKind::anh};
  std::optional<std::size_t> replications;  // default 20, 1 for replay
  std::uint64_t seed = 0;
  AnhMode anh_mode = AnhMode::sampled;
  SweepGrid grid;
  std::vector<std::int64_t> bench_horizons;  // default {10, 1e2, 1e3, 1e4, 1e5}
  DatasetSpec dataset;
  std::optional<double> threshold;
  std::string column;
  std::optional<bool> timing;  // default on for bench only
  std::size_t jobs = 0;        // 0 = OpenMP default

  std::size_t effective_replications() const;
  bool effective_timing() const;
  void validate() const;
};

/// Reads the keys accepted by the CLI ("kind", "policies", "reps", "seed", "anh_mode",
/// "gaps", "shifts", "seglens", "experts", "horizons", "dataset", "threshold",
/// "column", "timing", "jobs") into `cfg`, leaving absent keys untouched.
void apply_config_json(const nlohmann::json& doc, ExperimentConfig& cfg);

struct ResultRow {
  std::string kind;
  double param = 0.0;
  std::string policy;
  std::string metric;
  double mean = 0.0;
  double std = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double runtime_policy = 0.0;  // seconds, mean over replications
  double runtime_total = 0.0;

  bool operator==(const ResultRow&) const = default;
};

/// Per-replication measurements for one sweep point, one entry per configured policy.
struct ReplicationOutcome {
  std::vector<double> regret;
  std::vector<double> reward;
  std::vector<double> policy_seconds;
  std::vector<std::uint64_t> final_updates;
  std::vector<std::uint64_t> total_updates;
  double env_seconds = 0.0;
  std::vector<RunTrace> traces;  // filled only when requested
};

/// Environment points for a synthetic or bench experiment.
std::vector<SweepPoint> experiment_points(const ExperimentConfig& cfg);

/// One replication: seed = base seed + rep, split into parameter, environment and policy streams.
ReplicationOutcome run_replication(const SweepPoint& point, const ExperimentConfig& cfg, std::size_t rep,
                                   bool keep_traces = false);

/// All (point x replication) units, result index = point * replications + rep.
/// Units are distributed over OpenMP threads; `jobs` caps the thread count.
std::vector<ReplicationOutcome> run_replications(const std::vector<SweepPoint>& points, const ExperimentConfig& cfg,
                                                 std::size_t jobs, bool keep_traces = false);
/// Single-threaded reference for run_replications.
std::vector<ReplicationOutcome> run_replications_serial(const std::vector<SweepPoint>& points,
                                                        const ExperimentConfig& cfg, bool keep_traces = false);

struct ReplayResult {
  std::vector<ResultRow> rows;
  std::vector<double> reward_diff;  // cumulative r_t(1) - r_t(2); empty unless K = 2
  double threshold = 0.0;
  std::size_t skipped = 0;
};

/// Loads the replay rewards for `cfg.dataset`; fills threshold/skipped in `info` when present.
std::vector<double> load_replay_rewards(const ExperimentConfig& cfg, std::size_t& experts, ReplayResult* info = nullptr);

ReplayResult run_replay(const ExperimentConfig& cfg);

/// Runs any experiment kind and returns rows sorted by (param, policy, metric).
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

void sort_rows(std::vector<ResultRow>& rows);

// Output -------------------------------------------------------------------

OutputFormat parse_output_format(std::string_view name);
std::string format_number(double value);
std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::string rows_to_json(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_json(std::string_view text);
/// Writes rows to `path`; rejects empty input and unwritable paths.
void emit(const std::vector<ResultRow>& rows, OutputFormat format, const std::filesystem::path& path);
/// "t,diff" table of a cumulative reward-difference series.
void emit_series(const std::vector<double>& series, const std::filesystem::path& path);

}  // namespace driftbench
