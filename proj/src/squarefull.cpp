#include "ntbench/squarefull.hpp"

#include <algorithm>
#include <future>

#include "ntbench/arith.hpp"
#include "ntbench/errors.hpp"

namespace ntbench::squarefull {

namespace {

std::vector<std::uint8_t> squarefree_flags(std::uint64_t limit) {
  std::vector<std::uint8_t> flags(limit + 1, 1);
  for (std::uint64_t p = 2; p * p <= limit; ++p)
    for (std::uint64_t m = p * p; m <= limit; m += p * p) flags[m] = 0;
  return flags;
}

void collect(std::uint64_t x, std::uint64_t b_lo, std::uint64_t b_hi,
             const std::vector<std::uint8_t>& squarefree, std::vector<std::uint64_t>& out) {
  for (std::uint64_t b = b_lo; b <= b_hi; ++b) {
    if (!squarefree[b]) continue;
    const std::uint64_t b3 = b * b * b;
    const std::uint64_t a_max = arith::integer_root(x / b3, 2);
    for (std::uint64_t a = 1; a <= a_max; ++a) out.push_back(a * a * b3);
  }
}

}  // namespace

std::vector<std::uint64_t> enumerate_squarefull(std::uint64_t x, unsigned shards) {
  if (x == 0) throw ParameterError("enumerate_squarefull: x must be positive");
  if (x > kMaxEnumeration) throw ParameterError("enumerate_squarefull: x above 10^12");
  const std::uint64_t b_max = arith::integer_root(x, 3);
  const auto squarefree = squarefree_flags(b_max);
  shards = std::max(1u, std::min<unsigned>(shards, static_cast<unsigned>(b_max)));

  std::vector<std::uint64_t> out;
  if (shards == 1) {
    collect(x, 1, b_max, squarefree, out);
  } else {
    // Shards take contiguous b ranges; the sort below makes the merge order irrelevant.
    std::vector<std::future<std::vector<std::uint64_t>>> parts;
    const std::uint64_t step = b_max / shards;
    std::uint64_t lo = 1;
    for (unsigned s = 0; s < shards; ++s) {
      const std::uint64_t hi = s + 1 == shards ? b_max : lo + step - 1;
      parts.push_back(std::async(std::launch::async, [&, lo, hi] {
        std::vector<std::uint64_t> part;
        collect(x, lo, hi, squarefree, part);
        return part;
      }));
      lo = hi + 1;
    }
    for (auto& p : parts) {
      auto part = p.get();
      out.insert(out.end(), part.begin(), part.end());
    }
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw InvariantViolation("enumerate_squarefull: a^2 b^3 representation not unique");
  return out;
}

std::vector<std::uint64_t> consecutive_pairs(std::uint64_t x, unsigned shards) {
  const auto list = enumerate_squarefull(x + 1, shards);
  std::vector<std::uint64_t> pairs;
  for (std::uint64_t n : list) {
    if (n > x) break;
    if (std::binary_search(list.begin(), list.end(), n + 1)) pairs.push_back(n);
  }
  return pairs;
}

std::uint64_t recurrence_step(std::uint64_t n) {
  if (n == 0 || !arith::is_squarefull(n) || !arith::is_squarefull(n + 1))
    throw ParameterError("recurrence_step: n and n+1 must both be square-full");
  const unsigned __int128 m = static_cast<unsigned __int128>(4) * n * (n + 1);
  if (m + 1 > UINT64_MAX) throw BudgetExceeded("recurrence_step: 4n(n+1)+1 exceeds 64 bits");
  const auto out = static_cast<std::uint64_t>(m);
  if (!arith::is_squarefull(out) || !arith::is_squarefull(out + 1))
    throw InvariantViolation("recurrence_step: image pair is not square-full");
  return out;
}

std::uint64_t count_consecutive(std::uint64_t x, unsigned shards) {
  return consecutive_pairs(x, shards).size();
}

}  // namespace ntbench::squarefull
