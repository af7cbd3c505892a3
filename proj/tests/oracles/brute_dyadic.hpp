#pragma once

// Enumeration oracles for dyadic interval algebra. They work on explicit
// [first, last] pairs and never call into the library's interval arithmetic.

#include <cstdint>
#include <utility>
#include <vector>

namespace oracle {

using Span = std::pair<std::int64_t, std::int64_t>;  // [first, last]

/// Every interval [i * 2^n, (i + 1) * 2^n - 1] with i >= 1 and last <= bound.
std::vector<Span> all_dyadic(std::int64_t bound);

/// Members of all_dyadic(bound) that contain t, sorted by length.
std::vector<Span> containing(std::int64_t t, std::int64_t bound);

/// All ways to partition [first, last] into consecutive dyadic intervals.
std::vector<std::vector<Span>> all_partitions(std::int64_t first, std::int64_t last);

bool is_dyadic(const Span& s);

}  // namespace oracle
