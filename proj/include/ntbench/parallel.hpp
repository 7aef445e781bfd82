#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <vector>

namespace ntbench {

/// Splits [lo, hi] into `shards` contiguous chunks, evaluates f(a, b) on each
/// chunk concurrently and returns the sum. Addition is order-independent so
/// the result does not depend on the shard count.
template <class F>
std::uint64_t sharded_sum(std::uint64_t lo, std::uint64_t hi, unsigned shards, F&& f) {
  if (lo > hi) return 0;
  const std::uint64_t span = hi - lo + 1;
  shards = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(shards, span)));
  if (shards == 1) return f(lo, hi);
  std::vector<std::future<std::uint64_t>> parts;
  parts.reserve(shards);
  const std::uint64_t step = span / shards;
  std::uint64_t a = lo;
  for (unsigned s = 0; s < shards; ++s) {
    const std::uint64_t b = (s + 1 == shards) ? hi : a + step - 1;
    parts.push_back(std::async(std::launch::async, [&f, a, b] { return f(a, b); }));
    a = b + 1;
  }
  std::uint64_t total = 0;
  for (auto& p : parts) total += p.get();
  return total;
}

}  // namespace ntbench
