#include "oracles/brute_dyadic.hpp"

#include <algorithm>

namespace oracle {

bool is_dyadic(const Span& s) {
  const std::int64_t len = s.second - s.first + 1;
  if (len < 1) return false;
  std::int64_t p = 1;
  while (p < len) p *= 2;
  return p == len && s.first % len == 0 && s.first / len >= 1;
}

std::vector<Span> all_dyadic(std::int64_t bound) {
  std::vector<Span> out;
  for (std::int64_t first = 1; first <= bound; ++first) {
    for (std::int64_t last = first; last <= bound; ++last) {
      if (is_dyadic({first, last})) out.emplace_back(first, last);
    }
  }
  return out;
}

std::vector<Span> containing(std::int64_t t, std::int64_t bound) {
  std::vector<Span> out;
  for (const auto& s : all_dyadic(bound)) {
    if (s.first <= t && t <= s.second) out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const Span& a, const Span& b) {
    return a.second - a.first < b.second - b.first;
  });
  return out;
}

namespace {

void extend(std::int64_t cursor, std::int64_t last, std::vector<Span>& prefix, std::vector<std::vector<Span>>& out) {
  if (cursor > last) {
    out.push_back(prefix);
    return;
  }
  for (std::int64_t end = cursor; end <= last; ++end) {
    if (!is_dyadic({cursor, end})) continue;
    prefix.emplace_back(cursor, end);
    extend(end + 1, last, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<std::vector<Span>> all_partitions(std::int64_t first, std::int64_t last) {
  std::vector<std::vector<Span>> out;
  std::vector<Span> prefix;
  extend(first, last, prefix, out);
  return out;
}

}  // namespace oracle
