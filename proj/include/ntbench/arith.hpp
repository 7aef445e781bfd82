#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace ntbench::arith {

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization of a positive 64-bit integer. Primes are strictly
/// increasing and every listed prime is certified by a deterministic test.
class Factorization {
 public:
  Factorization(std::uint64_t value, std::vector<PrimePower> factors);

  std::uint64_t value() const { return value_; }
  const std::vector<PrimePower>& factors() const& { return factors_; }
  // by value on temporaries, so `for (auto& pp : factorize(n).factors())` is safe
  std::vector<PrimePower> factors() && { return std::move(factors_); }
  bool is_one() const { return factors_.empty(); }
  unsigned max_exponent() const;

  /// Product of prime^exponent, recomputed exactly.
  mpz_class product() const;

 private:
  std::uint64_t value_;
  std::vector<PrimePower> factors_;
};

// Modular helpers on 64-bit operands (128-bit intermediates).
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Deterministic Miller-Rabin; exact for every 64-bit input.
bool is_prime(std::uint64_t n);

/// Trial division by the cached prime table, deterministic Miller-Rabin on the
/// cofactor, and Pollard-Brent (fixed seeds) to split composite cofactors.
/// Throws ParameterError for n = 0.
Factorization factorize(std::uint64_t n);

int mobius(std::uint64_t n);
int mobius(const Factorization& f);

/// True iff no prime p has p^k | n. Requires n >= 1, k >= 2.
bool is_k_free(std::uint64_t n, unsigned k);

/// k-freeness of a signed value: 0 is never k-free, negatives use |v|.
bool is_k_free_signed(std::int64_t v, unsigned k);

/// Product of the distinct primes dividing n (squarefree kernel).
std::uint64_t radical(const Factorization& f);

struct SquarefullParts {
  std::uint64_t a;
  std::uint64_t b;  // squarefree, n = a^2 b^3

  friend bool operator==(const SquarefullParts&, const SquarefullParts&) = default;
};

/// n = a^2 b^3 with b squarefree, or nullopt when some prime divides n
/// exactly once. n = 1 decomposes as (1, 1).
std::optional<SquarefullParts> squarefull_decompose(std::uint64_t n);
bool is_squarefull(std::uint64_t n);

/// floor(n^(1/k)) by Newton iteration plus an exact bracketing correction.
/// Throws ParameterError for k = 0 or n < 0.
mpz_class integer_root(const mpz_class& n, unsigned k);
std::uint64_t integer_root(std::uint64_t n, unsigned k);

/// base^exp, or nullopt if the result exceeds `limit`.
std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp,
                                         std::uint64_t limit = UINT64_MAX);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);

}  // namespace ntbench::arith
