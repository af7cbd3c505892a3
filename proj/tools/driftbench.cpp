// driftbench: run shifting-environment expert-selection experiments and write result tables.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "driftbench/harness.hpp"

namespace {

template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    T value{};
    if constexpr (std::is_floating_point_v<T>) {
      value = std::stod(item, &used);
    } else {
      value = static_cast<T>(std::stoll(item, &used));
    }
    if (used != item.size()) throw std::invalid_argument("bad list element '" + item + "'");
    out.push_back(value);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace driftbench;

  CLI::App app{"Expert selection under shifting stochastic rewards: FTL, FTBI and AdaNormalHedge"};
  app.set_version_flag("--version", "driftbench 1.0");

  std::string kind;
  std::string config_path, policies, anh_mode, out_path, format = "csv", diff_out;
  std::string gaps, shifts, seglens, experts, horizons, dataset, column;
  std::size_t reps = 0, jobs = 0;
  std::uint64_t seed = 0;
  double threshold = 0.0;
  bool timing = false, no_timing = false;

  app.add_option("kind", kind, "gap | shifts | seglen | experts | scaledN | scaledDelta | scaledBoth | replay | bench");
  app.add_option("--config", config_path, "JSON config file; flags override its values")->check(CLI::ExistingFile);
  auto* o_policies = app.add_option("--policies", policies, "comma list of ftl, ftbi, anh");
  auto* o_reps = app.add_option("--reps", reps, "replications (default 20, 1 for replay)")->check(CLI::PositiveNumber);
  auto* o_seed = app.add_option("--seed", seed, "base seed; replication j uses seed + j");
  auto* o_anh = app.add_option("--anh-mode", anh_mode, "sampled | fractional");
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--format", format, "csv | json");
  auto* o_jobs = app.add_option("--jobs", jobs, "worker threads for replications (0 = all cores)");
  auto* o_gaps = app.add_option("--gaps", gaps, "gap sweep values, e.g. 0.06,0.17,0.28,0.39,0.5");
  auto* o_shifts = app.add_option("--shifts", shifts, "segment counts for the shifts sweep");
  auto* o_seglens = app.add_option("--seglens", seglens, "segment lengths for the seglen sweep");
  auto* o_experts = app.add_option("--experts", experts, "expert counts for the experts sweep");
  auto* o_horizons = app.add_option("--horizons", horizons, "horizons T for scaled sweeps and bench");
  auto* o_dataset = app.add_option("--dataset", dataset, "square | pm25:PATH | power:PATH | csv:PATH | rewards:PATH");
  auto* o_threshold = app.add_option("--threshold", threshold, "replay threshold");
  auto* o_column = app.add_option("--column", column, "measurement column name or zero-based index");
  app.add_option("--diff-out", diff_out, "replay: write the cumulative reward difference series here");
  auto* o_timing = app.add_flag("--timing", timing, "record wall-clock columns (default for bench)");
  auto* o_no_timing = app.add_flag("--no-timing", no_timing, "zero wall-clock columns for byte-stable output");
  o_timing->excludes(o_no_timing);

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      apply_config_json(nlohmann::json::parse(in), cfg);
    } else if (kind.empty()) {
      throw std::invalid_argument("an experiment kind is required");
    }
    if (!kind.empty()) cfg.kind = parse_experiment_kind(kind);
    if (o_policies->count()) {
      cfg.policies.clear();
      for (const auto& p : CLI::detail::split(policies, ',')) cfg.policies.push_back(parse_policy_kind(p));
    }
    if (o_reps->count()) cfg.replications = reps;
    if (o_seed->count()) cfg.seed = seed;
    if (o_anh->count()) cfg.anh_mode = parse_anh_mode(anh_mode);
    if (o_jobs->count()) cfg.jobs = jobs;
    if (o_gaps->count()) cfg.grid.gaps = parse_list<double>(gaps);
    if (o_shifts->count()) cfg.grid.shifts = parse_list<std::int64_t>(shifts);
    if (o_seglens->count()) cfg.grid.seglens = parse_list<std::int64_t>(seglens);
    if (o_experts->count()) cfg.grid.experts = parse_list<std::int64_t>(experts);
    if (o_horizons->count()) cfg.grid.horizons = cfg.bench_horizons = parse_list<std::int64_t>(horizons);
    if (o_dataset->count()) cfg.dataset = parse_dataset(dataset);
    if (o_threshold->count()) cfg.threshold = threshold;
    if (o_column->count()) cfg.column = column;
    if (timing) cfg.timing = true;
    if (no_timing) cfg.timing = false;
    const OutputFormat fmt = parse_output_format(format);

    std::vector<ResultRow> rows;
    if (cfg.kind == ExperimentKind::replay) {
      cfg.validate();
      auto result = run_replay(cfg);
      if (!diff_out.empty()) emit_series(result.reward_diff, diff_out);
      if (result.skipped > 0) std::cerr << "driftbench: skipped " << result.skipped << " rows with missing values\n";
      rows = std::move(result.rows);
    } else {
      if (!diff_out.empty()) throw std::invalid_argument("--diff-out only applies to replay");
      rows = run_experiment(cfg);
    }

    if (out_path.empty()) {
      if (rows.empty()) throw std::invalid_argument("no result rows to write");
      std::cout << (fmt == OutputFormat::csv ? rows_to_csv(rows) : rows_to_json(rows));
    } else {
      emit(rows, fmt, out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "driftbench: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
