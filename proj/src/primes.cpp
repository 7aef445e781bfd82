#include "ntbench/primes.hpp"

namespace ntbench {

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

std::span<const std::uint64_t> small_primes() {
  static const std::vector<std::uint64_t> table = primes_up_to(1u << 16);
  return table;
}

}  // namespace ntbench
