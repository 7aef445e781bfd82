#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ntbench {

/// All primes p <= limit, by a plain sieve of Eratosthenes.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

/// Cached primes below 2^16, used for trial division.
std::span<const std::uint64_t> small_primes();

}  // namespace ntbench
