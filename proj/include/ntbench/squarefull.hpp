#pragma once

#include <cstdint>
#include <vector>

namespace ntbench::squarefull {

/// Every square-full n <= x in increasing order, built from n = a^2 b^3 with
/// b squarefree, b <= x^(1/3), a <= (x / b^3)^(1/2). 1 is included.
/// x is limited to 10^12 (Parameter error beyond).
std::vector<std::uint64_t> enumerate_squarefull(std::uint64_t x, unsigned shards = 1);

/// n <= x with n and n + 1 both square-full.
std::vector<std::uint64_t> consecutive_pairs(std::uint64_t x, unsigned shards = 1);

/// 4n(n+1) for a consecutive square-full pair (n, n+1). Throws ParameterError
/// if the pair is not square-full, BudgetExceeded if 4n(n+1)+1 leaves 64 bits,
/// InvariantViolation if the image pair fails the square-full check.
std::uint64_t recurrence_step(std::uint64_t n);

std::uint64_t count_consecutive(std::uint64_t x, unsigned shards = 1);

inline constexpr std::uint64_t kMaxEnumeration = 1'000'000'000'000;

}  // namespace ntbench::squarefull
