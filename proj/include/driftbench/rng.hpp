#pragma once

#include <cstdint>
#include <random>

namespace driftbench {

using Rng = std::mt19937_64;

/// Named sub-streams of one replication seed. Environment and policy draws never share a stream.
enum class Stream : std::uint32_t { environment = 1, policy = 2, parameters = 3 };

inline Rng make_rng(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

/// Uniform double in [0, 1) with 53 random bits; unlike std::uniform_real_distribution
/// the mapping is fixed, so draws are identical across standard libraries.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace driftbench
