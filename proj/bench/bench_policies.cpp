// Timing comparison of the policies (per-round cost versus horizon) and of the
// OpenMP replication runner against its serial reference.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "driftbench/harness.hpp"

using namespace driftbench;

namespace {

double best_of(int trials, const std::function<double()>& f) {
  double best = 1e300;
  for (int i = 0; i < trials; ++i) best = std::min(best, f());
  return best;
}

}  // namespace

int main() {
  std::printf("%-8s %10s %14s %14s %10s\n", "policy", "T", "total_s", "per_round_ns", "ops_last");
  for (TimeStep t : {10, 100, 1000, 10000, 100000}) {
    const SegmentedBernoulliSpec spec({{t / 2, {0.7, 0.5}}, {t - t / 2, {0.5, 0.7}}});
    Rng env = make_rng(1, Stream::environment);
    const auto rewards = bernoulli_rewards(spec, env);
    for (PolicyKind kind : {PolicyKind::ftl, PolicyKind::ftbi, PolicyKind::anh}) {
      std::uint64_t ops = 0;
      const double secs = best_of(5, [&] {
        auto p = make_policy(kind, 2, 1);
        const auto trace = run_policy(*p, rewards, 2);
        ops = trace.updates.back();
        return trace.policy_seconds;
      });
      std::printf("%-8s %10lld %14.6f %14.1f %10llu\n", std::string(to_string(kind)).c_str(),
                  static_cast<long long>(t), secs, 1e9 * secs / double(t), static_cast<unsigned long long>(ops));
    }
  }

  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::gap;
  cfg.replications = 20;
  const auto points = experiment_points(cfg);
  auto time = [](const std::function<void()>& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  const double serial = time([&] { run_replications_serial(points, cfg); });
  const double parallel = time([&] { run_replications(points, cfg, 0); });
  std::printf("\ngap sweep, 20 reps: serial %.3f s, openmp (%d threads) %.3f s, speedup %.2fx\n", serial,
              omp_get_max_threads(), parallel, serial / parallel);
  return 0;
}
