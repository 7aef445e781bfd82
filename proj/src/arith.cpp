#include "ntbench/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ntbench/errors.hpp"
#include "ntbench/primes.hpp"

namespace ntbench::arith {

Factorization::Factorization(std::uint64_t value, std::vector<PrimePower> factors)
    : value_(value), factors_(std::move(factors)) {}

unsigned Factorization::max_exponent() const {
  unsigned m = 0;
  for (const auto& pp : factors_) m = std::max(m, pp.exponent);
  return m;
}

mpz_class Factorization::product() const {
  mpz_class acc = 1;
  for (const auto& pp : factors_) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), pp.prime, pp.exponent);
    acc *= p;
  }
  return acc;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::uint64_t bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : bases) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : bases) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

namespace {

// Pollard-Brent with a fixed seed sequence; returns a nontrivial factor of
// an odd composite n.
std::uint64_t pollard_brent(std::uint64_t n) {
  for (std::uint64_t c = 1;; ++c) {
    auto f = [&](std::uint64_t y) { return (mulmod(y, y, n) + c) % n; };
    std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
    constexpr std::uint64_t block = 128;
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      for (std::uint64_t k = 0; k < r && g == 1; k += block) {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(block, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split_cofactor(std::uint64_t m, std::vector<std::uint64_t>& out) {
  if (m == 1) return;
  if (is_prime(m)) {
    out.push_back(m);
    return;
  }
  std::uint64_t r = integer_root(m, 2);
  if (r * r == m) {
    split_cofactor(r, out);
    split_cofactor(r, out);
    return;
  }
  std::uint64_t d = pollard_brent(m);
  split_cofactor(d, out);
  split_cofactor(m / d, out);
}

}  // namespace

Factorization factorize(std::uint64_t n) {
  if (n == 0) throw ParameterError("factorize: n must be positive");
  std::vector<PrimePower> factors;
  std::uint64_t m = n;
  for (std::uint64_t p : small_primes()) {
    if (p * p > m) break;
    if (m % p != 0) continue;
    unsigned e = 0;
    do {
      m /= p;
      ++e;
    } while (m % p == 0);
    factors.push_back({p, e});
  }
  if (m > 1) {
    const std::uint64_t table_max = small_primes().back();
    if (m <= table_max * table_max || is_prime(m)) {
      factors.push_back({m, 1});
    } else {
      std::vector<std::uint64_t> large;
      split_cofactor(m, large);
      std::sort(large.begin(), large.end());
      for (std::uint64_t p : large) {
        if (!factors.empty() && factors.back().prime == p) {
          ++factors.back().exponent;
        } else {
          factors.push_back({p, 1});
        }
      }
    }
  }
  return Factorization(n, std::move(factors));
}

int mobius(const Factorization& f) {
  if (f.max_exponent() > 1) return 0;
  return f.factors().size() % 2 == 0 ? 1 : -1;
}

int mobius(std::uint64_t n) { return mobius(factorize(n)); }

bool is_k_free(std::uint64_t n, unsigned k) {
  if (k < 2) throw ParameterError("is_k_free: k must be >= 2");
  if (n == 0) throw ParameterError("is_k_free: n must be positive");
  return factorize(n).max_exponent() < k;
}

bool is_k_free_signed(std::int64_t v, unsigned k) {
  if (v == 0) return false;
  const std::uint64_t mag = v < 0 ? 0 - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
  return is_k_free(mag, k);
}

std::uint64_t radical(const Factorization& f) {
  std::uint64_t r = 1;
  for (const auto& pp : f.factors()) r *= pp.prime;
  return r;
}

std::optional<SquarefullParts> squarefull_decompose(std::uint64_t n) {
  const Factorization f = factorize(n);
  std::uint64_t a = 1, b = 1;
  for (const auto& [p, e] : f.factors()) {
    if (e == 1) return std::nullopt;
    // e = 2i + 3j with j in {0, 1}: odd exponents put one p into b.
    const unsigned j = e % 2;
    const unsigned i = (e - 3 * j) / 2;
    for (unsigned t = 0; t < i; ++t) a *= p;
    if (j) b *= p;
  }
  return SquarefullParts{a, b};
}

bool is_squarefull(std::uint64_t n) { return squarefull_decompose(n).has_value(); }

mpz_class integer_root(const mpz_class& n, unsigned k) {
  if (k == 0) throw ParameterError("integer_root: k must be >= 1");
  if (n < 0) throw ParameterError("integer_root: n must be non-negative");
  if (k == 1 || n < 2) return n;
  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  // Start above the root; Newton decreases monotonically from there.
  mpz_class r = 1;
  r <<= static_cast<mp_bitcnt_t>((bits + k - 1) / k);
  mpz_class rk1, next;
  while (true) {
    mpz_pow_ui(rk1.get_mpz_t(), r.get_mpz_t(), k - 1);
    next = ((k - 1) * r + n / rk1) / k;
    if (next >= r) break;
    r = next;
  }
  mpz_class pw;
  auto pow_k = [&](const mpz_class& v) {
    mpz_pow_ui(pw.get_mpz_t(), v.get_mpz_t(), k);
    return pw;
  };
  while (pow_k(r) > n) --r;
  while (pow_k(r + 1) <= n) ++r;
  return r;
}

std::uint64_t integer_root(std::uint64_t n, unsigned k) {
  if (k == 0) throw ParameterError("integer_root: k must be >= 1");
  if (k == 1 || n < 2) return n;
  if (k >= 64) return 1;
  auto r = static_cast<std::uint64_t>(std::pow(static_cast<long double>(n), 1.0L / k));
  auto exceeds = [&](std::uint64_t v) { return !checked_pow(v, k, n).has_value(); };
  while (r > 0 && exceeds(r)) --r;
  while (!exceeds(r + 1)) ++r;
  return r;
}

std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp, std::uint64_t limit) {
  unsigned __int128 acc = 1;
  for (unsigned i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > limit) return std::nullopt;
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace ntbench::arith
