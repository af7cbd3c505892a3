#pragma once

// Literal transcription of Follow-The-Best-Interval with every dyadic interval
// materialized up front as an explicit list of member time steps. Shares no
// code with the library policy.

#include <cstdint>
#include <vector>

namespace oracle {

struct BruteStep {
  std::size_t expert;
  std::int64_t interval_first;
  std::int64_t interval_last;
};

/// rewards[t - 1][k]; ties prefer the longer interval, then the lower expert.
std::vector<BruteStep> brute_ftbi(const std::vector<std::vector<double>>& rewards);

}  // namespace oracle
