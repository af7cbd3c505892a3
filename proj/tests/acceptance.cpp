// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "driftbench/harness.hpp"
#include "oracles/brute_dyadic.hpp"
#include "oracles/brute_ftbi.hpp"

using namespace driftbench;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << id << ". " << name << " -- " << o.detail << " ("
            << std::round(secs * 100) / 100 << " s)" << std::endl;
}

std::string num(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

ExperimentConfig synthetic(ExperimentKind kind, std::vector<PolicyKind> policies) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.policies = std::move(policies);
  cfg.replications = 20;
  cfg.seed = 2018;
  return cfg;
}

// Regret stats per (point, policy) from raw outcomes.
ReplicationStats regret_stats(const std::vector<ReplicationOutcome>& outcomes, std::size_t point, std::size_t policy,
                              std::size_t reps) {
  std::vector<double> v;
  for (std::size_t r = 0; r < reps; ++r) v.push_back(outcomes[point * reps + r].regret[policy]);
  return aggregate(v);
}

// Lengths increase by at least 2x, then (after one unconstrained step) decrease by at least 2x.
bool geometric_shape(const std::vector<oracle::Span>& pieces) {
  std::vector<std::int64_t> len;
  for (const auto& p : pieces) len.push_back(p.second - p.first + 1);
  std::size_t i = 1;
  while (i < len.size() && len[i] >= 2 * len[i - 1]) ++i;
  // pieces [0, i) form the increasing run ending at I^0; I^1 = len[i] is free.
  for (std::size_t j = i + 2; j < len.size(); ++j) {
    if (2 * len[j] > len[j - 1]) return false;
  }
  return true;
}

}  // namespace

int main() {
  report(1, "geometric covering oracle", [] {
    const std::vector<oracle::Span> fig{{1, 1}, {2, 3}, {4, 7}, {8, 15}, {16, 23}, {24, 27}, {28, 29}, {30, 30}};
    std::vector<oracle::Span> got;
    for (const auto& d : geometric_cover(TimeRange(1, 30))) got.emplace_back(d.first(), d.last());
    if (got != fig) return Outcome{false, "[1,30] cover differs from the reference figure"};

    std::size_t ranges = 0;
    for (std::int64_t first = 1; first <= 2048; ++first) {
      for (std::int64_t last = first; last <= 2048; ++last) {
        const auto cover = geometric_cover(TimeRange(first, last));
        std::vector<oracle::Span> pieces;
        std::int64_t cursor = first;
        for (const auto& d : cover) {
          const oracle::Span s{d.first(), d.last()};
          if (s.first != cursor || !oracle::is_dyadic(s)) {
            return Outcome{false, "bad piece in [" + std::to_string(first) + "," + std::to_string(last) + "]"};
          }
          cursor = s.second + 1;
          pieces.push_back(s);
        }
        const double bound = 2 * std::log2(double(last - first + 1)) + 2;
        if (cursor != last + 1 || double(cover.size()) > bound || !geometric_shape(pieces)) {
          return Outcome{false, "invalid cover of [" + std::to_string(first) + "," + std::to_string(last) + "]"};
        }
        ++ranges;
      }
    }
    return Outcome{true, "[1,30] matches; " + std::to_string(ranges) + " ranges in [1,2048] partitioned"};
  });

  report(2, "active-set law and FTBI update counts", [] {
    for (TimeStep t = 1; t <= 100000; ++t) {
      const auto a = active_set(t);
      if (a.size() != static_cast<std::size_t>(std::floor(std::log2(double(t)))) + 1) {
        return Outcome{false, "wrong |ACTIVE(" + std::to_string(t) + ")|"};
      }
      for (const auto& d : a) {
        if (!d.contains(t)) return Outcome{false, "interval does not contain " + std::to_string(t)};
      }
    }
    for (std::size_t k : {2u, 5u}) {
      FtbiPolicy p(k);
      Rng rng = make_rng(1, Stream::environment);
      std::vector<double> r(k);
      for (TimeStep t = 1; t <= 100000; ++t) {
        for (auto& v : r) v = uniform01(rng);
        const Decision d = p.choose();
        p.update(r, d);
        if (p.last_update_ops() != k * active_set(t).size()) {
          return Outcome{false, "K=" + std::to_string(k) + " ops mismatch at t=" + std::to_string(t)};
        }
      }
    }
    return Outcome{true, "t <= 1e5 exact for K in {2, 5}"};
  });

  report(3, "FTBI brute-force equivalence", [] {
    std::mt19937_64 rng(3);
    for (int seq = 0; seq < 100; ++seq) {
      const int horizon = 1 + int(rng() % 32);
      std::vector<std::vector<double>> rewards(horizon, std::vector<double>(2));
      for (auto& row : rewards) {
        // Mix of binary and quarter-step rewards.
        for (auto& v : row) v = seq % 2 ? double(rng() % 2) : double(rng() % 5) / 4.0;
      }
      const auto brute = oracle::brute_ftbi(rewards);
      FtbiPolicy p(2);
      for (int t = 0; t < horizon; ++t) {
        const Decision d = p.choose();
        p.update(rewards[t], d);
        if (d.expert != brute[t].expert || d.interval->first() != brute[t].interval_first ||
            d.interval->last() != brute[t].interval_last) {
          return Outcome{false, "sequence " + std::to_string(seq) + " diverges at t=" + std::to_string(t + 1)};
        }
      }
    }
    return Outcome{true, "100 sequences, identical traces"};
  });

  report(4, "FTL constant regret", [] {
    auto cfg = synthetic(ExperimentKind::seglen, {PolicyKind::ftl});
    std::vector<SweepPoint> points;
    for (TimeStep t : {TimeStep{1000}, TimeStep{10000}}) {
      points.push_back({double(t), SegmentedBernoulliSpec({{t, {0.6, 0.4}}})});
    }
    const auto out = run_replications(points, cfg, 0);
    const auto short_run = regret_stats(out, 0, 0, 20);
    const auto long_run = regret_stats(out, 1, 0, 20);
    const bool ok = long_run.mean - short_run.mean < 2 * short_run.std;
    return Outcome{ok, "T=1e3 " + num(short_run.mean) + " +- " + num(short_run.std) + ", T=1e4 " +
                           num(long_run.mean) + " (limit: increase < " + num(2 * short_run.std) + ")"};
  });

  report(5, "shift recovery ordering (segment length 1e4)", [] {
    auto cfg = synthetic(ExperimentKind::seglen, {PolicyKind::ftbi, PolicyKind::anh});
    cfg.grid.seglens = {10000};
    const auto points = experiment_points(cfg);
    const auto out = run_replications(points, cfg, 0);
    const auto ftbi = regret_stats(out, 0, 0, 20);
    const auto anh = regret_stats(out, 0, 1, 20);
    const double horizon = double(points[0].spec.horizon());
    const bool ok = ftbi.mean < anh.mean && ftbi.mean < 0.05 * horizon;
    return Outcome{ok, "FTBI " + num(ftbi.mean) + " +- " + num(ftbi.std) + ", ANH " + num(anh.mean) + " +- " +
                           num(anh.std) + ", 5% of T = " + num(0.05 * horizon)};
  });

  report(6, "gap sweep ordering", [] {
    auto cfg = synthetic(ExperimentKind::gap, {PolicyKind::ftbi, PolicyKind::anh});
    const auto points = experiment_points(cfg);
    const auto out = run_replications(points, cfg, 0);
    bool ok = true;
    std::string detail;
    for (std::size_t p = 0; p < points.size(); ++p) {
      const auto ftbi = regret_stats(out, p, 0, 20);
      const auto anh = regret_stats(out, p, 1, 20);
      ok = ok && ftbi.mean <= anh.mean + anh.std;
      detail += "d=" + num(points[p].value) + ": " + num(ftbi.mean) + " vs " + num(anh.mean) + "+-" + num(anh.std) + "; ";
    }
    return Outcome{ok, detail};
  });

  report(7, "scalability ordering at T = 1e5", [] {
    const SegmentedBernoulliSpec spec({{50000, {0.7, 0.5}}, {50000, {0.5, 0.7}}});
    Rng env = make_rng(7, Stream::environment);
    const auto rewards = bernoulli_rewards(spec, env);
    double ftbi_best = 1e300, anh_best = 1e300;
    std::uint64_t ftbi_final_ops = 0;
    for (int trial = 0; trial < 3; ++trial) {
      FtbiPolicy ftbi(2);
      const auto tf = run_policy(ftbi, rewards, 2);
      ftbi_best = std::min(ftbi_best, tf.policy_seconds);
      ftbi_final_ops = tf.updates.back();
      AnhPolicy anh(2, 7);
      anh_best = std::min(anh_best, run_policy(anh, rewards, 2).policy_seconds);
    }
    const bool log_growth = ftbi_final_ops == 2 * active_count(100000);
    const bool ok = ftbi_best <= 0.5 * anh_best && log_growth;
    return Outcome{ok, "FTBI " + num(ftbi_best) + " s, ANH " + num(anh_best) + " s, ratio " +
                           num(anh_best / ftbi_best) + "x; final-round updates " + std::to_string(ftbi_final_ops)};
  });

  report(8, "replay lift over FTL", [] {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::replay;
    cfg.dataset = parse_dataset("square");
    double ftbi_lift = 0.0, anh_lift = 0.0;
    for (const auto& r : run_replay(cfg).rows) {
      if (r.metric == "lift_pct" && r.policy == "ftbi") ftbi_lift = r.mean;
      if (r.metric == "lift_pct" && r.policy == "anh") anh_lift = r.mean;
    }
    bool ok = ftbi_lift > 0.0;
    std::string detail = "square wave: FTBI " + num(ftbi_lift) + "%, ANH " + num(anh_lift) + "%";

    const char* pm25 = std::getenv("DRIFTBENCH_PM25");
    if (pm25 && *pm25) {
      SeriesSource src = pm25_preset(pm25);
      const double median = rounded_median(load_series(src).values);
      cfg.dataset = parse_dataset(std::string("pm25:") + pm25);
      const auto res = run_replay(cfg);
      double f = 0.0, a = 0.0;
      for (const auto& r : res.rows) {
        if (r.metric == "lift_pct" && r.policy == "ftbi") f = r.mean;
        if (r.metric == "lift_pct" && r.policy == "anh") a = r.mean;
      }
      ok = ok && median == 75.0 && res.threshold == 75.0 && f > 0.0 && a > 0.0;
      detail += "; PM2.5: median " + num(median) + ", FTBI " + num(f) + "%, ANH " + num(a) + "%";
    } else {
      detail += "; PM2.5 file not supplied (set DRIFTBENCH_PM25), dataset clause not exercised";
    }
    return Outcome{ok, detail};
  });

  report(9, "ANH potential oracle and accumulator invariant", [] {
    const double w00 = 0.5 * (std::exp(1.0 / 3.0) - 1.0);
    const double w11 = 0.5 * (std::exp(2.0 / 3.0) - 1.0);
    if (std::abs(anh_potential(0, 0) - w00) > 1e-9 || std::abs(anh_potential(1, 1) - w11) > 1e-9) {
      return Outcome{false, "potential values off"};
    }
    AnhPolicy p(2, 9);
    Rng rng = make_rng(9, Stream::environment);
    std::size_t checked = 0;
    for (int t = 0; t < 10000; ++t) {
      const Decision d = p.choose();
      p.update(std::vector<double>{uniform01(rng), uniform01(rng)}, d);
      for (const auto& e : p.sleeping_experts()) {
        if (e.abs_regret < std::abs(e.regret)) return Outcome{false, "C < |R| at round " + std::to_string(t + 1)};
        ++checked;
      }
    }
    return Outcome{true, "w(0,0), w(1,1) within 1e-9; C >= |R| on " + std::to_string(checked) + " checks"};
  });

  report(10, "determinism", [] {
    const fs::path dir = fs::temp_directory_path() / "driftbench_acceptance";
    fs::create_directories(dir);
    auto read = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    for (auto kind : {ExperimentKind::gap, ExperimentKind::shifts, ExperimentKind::replay}) {
      ExperimentConfig cfg;
      cfg.kind = kind;
      cfg.seed = 42;
      cfg.replications = kind == ExperimentKind::replay ? 3 : 5;
      cfg.jobs = 1;
      emit(run_experiment(cfg), OutputFormat::csv, dir / "one.csv");
      cfg.jobs = 8;
      emit(run_experiment(cfg), OutputFormat::csv, dir / "two.csv");
      emit(run_experiment(cfg), OutputFormat::json, dir / "three.json");
      emit(run_experiment(cfg), OutputFormat::json, dir / "four.json");
      if (read(dir / "one.csv") != read(dir / "two.csv") || read(dir / "three.json") != read(dir / "four.json")) {
        return Outcome{false, std::string(to_string(kind)) + " output differs between runs"};
      }
    }
    ExperimentConfig cfg = synthetic(ExperimentKind::experts, {PolicyKind::ftl, PolicyKind::ftbi, PolicyKind::anh});
    cfg.grid.experts = {2, 8};
    const auto points = experiment_points(cfg);
    const auto a = run_replications(points, cfg, 1, true);
    const auto b = run_replications(points, cfg, 8, true);
    for (std::size_t u = 0; u < a.size(); ++u) {
      for (std::size_t i = 0; i < a[u].traces.size(); ++i) {
        if (!a[u].traces[i].same_decisions(b[u].traces[i])) return Outcome{false, "trace differs across --jobs"};
      }
    }
    return Outcome{true, "byte-identical CSV/JSON; traces equal under 1 and 8 jobs"};
  });

  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
