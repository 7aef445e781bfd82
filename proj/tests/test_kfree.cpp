#include <doctest.h>

#include <set>

#include "ntbench/arith.hpp"
#include "ntbench/errors.hpp"
#include "ntbench/kfree.hpp"
#include "oracles.hpp"

using namespace ntbench;
using namespace ntbench::kfree;

namespace {

std::uint64_t naive_pairs(std::uint64_t lo, std::uint64_t hi, unsigned k, std::int64_t h) {
  std::uint64_t c = 0;
  for (std::uint64_t n = lo; n <= hi; ++n)
    c += oracle::k_free(n, k) && oracle::k_free_signed(static_cast<std::int64_t>(n) + h, k);
  return c;
}

std::uint64_t naive_tuple(std::uint64_t lo, std::uint64_t hi, unsigned k,
                          const std::vector<LinearForm>& forms) {
  std::uint64_t c = 0;
  for (std::uint64_t n = lo; n <= hi; ++n) {
    bool ok = true;
    for (const auto& f : forms) ok = ok && oracle::k_free_signed(f.a * static_cast<std::int64_t>(n) + f.b, k);
    c += ok;
  }
  return c;
}

// Residues n mod p^k with p^k | l_i(n) for some i, counted directly.
std::uint64_t naive_rho(std::uint64_t p, unsigned k, const std::vector<LinearForm>& forms) {
  const std::int64_t q = static_cast<std::int64_t>(oracle::ipow(p, k));
  std::uint64_t c = 0;
  for (std::int64_t n = 0; n < q; ++n) {
    bool hit = false;
    for (const auto& f : forms) hit = hit || ((f.a * n + f.b) % q == 0);
    c += hit;
  }
  return c;
}

LinearFormSystem random_system(unsigned k) {
  for (;;) {
    const std::size_t r = oracle::uniform(1, 4);
    std::vector<LinearForm> forms;
    for (std::size_t i = 0; i < r; ++i)
      forms.push_back({oracle::uniform_signed(1, 12) * (oracle::uniform(0, 4) == 0 ? -1 : 1),
                       oracle::uniform_signed(-30, 30)});
    try {
      return LinearFormSystem(k, forms);
    } catch (const ParameterError&) {
    }
  }
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(PairParams(1, 1), ParameterError);
  CHECK_THROWS_AS(PairParams(2, 0), ParameterError);
  CHECK_THROWS_AS(LinearFormSystem(2, {}), ParameterError);
  CHECK_THROWS_AS(LinearFormSystem(2, {{0, 1}}), ParameterError);
  CHECK_THROWS_AS(LinearFormSystem(2, {{1, 1}, {2, 2}}), ParameterError);  // proportional
  CHECK_THROWS_AS(sieve_k_free(0, 10, 2), ParameterError);
  CHECK_THROWS_AS(sieve_k_free(10, 9, 2), ParameterError);
  CHECK_THROWS_AS(count_pairs(0, PairParams(2, 1)), ParameterError);
}

TEST_CASE("sieve window matches the definition") {
  for (unsigned k = 2; k <= 4; ++k) {
    const auto w = sieve_k_free(1, 20000, k);
    for (std::uint64_t n = 1; n <= 20000; ++n) REQUIRE(w.is_k_free(n) == oracle::k_free(n, k));
  }
  // a window crossing several segments and starting off zero
  const std::uint64_t lo = 3 * kSegmentSize - 1234, hi = 3 * kSegmentSize + 777;
  const auto w = sieve_k_free(lo, hi, 2);
  for (std::uint64_t n = lo; n <= hi; ++n) REQUIRE(w.is_k_free(n) == arith::is_k_free(n, 2));
}

TEST_CASE("count_k_free examples and sharding") {
  CHECK(count_k_free(1, 10, 2) == 7);
  CHECK(count_k_free(1, 100, 2) == 61);
  CHECK(count_k_free(1, 1000000, 2) == 607926);
  const auto single = count_k_free(1, 3 * kSegmentSize + 5, 3);
  for (unsigned s : {2u, 3u, 7u}) CHECK(count_k_free(1, 3 * kSegmentSize + 5, 3, s) == single);
}

TEST_CASE("count_pairs examples") {
  CHECK(count_pairs(20, PairParams(2, 1)) == 7);
  CHECK(count_pairs(1, PairParams(2, 1)) == 1);
  CHECK(count_pairs(10, PairParams(2, -1)) == naive_pairs(1, 10, 2, -1));
  // n = 1 with h = -1 pairs with 0, which is never k-free
  CHECK(count_pairs(1, PairParams(2, -1)) == 0);
}

TEST_CASE("count_pairs equals naive counting, both conventions") {
  for (unsigned k = 2; k <= 4; ++k) {
    for (std::int64_t h : {1, -1, 3, -7, 12}) {
      for (std::uint64_t x : {1ULL, 2ULL, 17ULL, 500ULL, 3001ULL}) {
        REQUIRE(count_pairs(x, PairParams(k, h), RangeConvention::UpTo) == naive_pairs(1, x, k, h));
        REQUIRE(count_pairs(x, PairParams(k, h), RangeConvention::Dyadic) == naive_pairs(x + 1, 2 * x, k, h));
      }
    }
  }
}

TEST_CASE("count_pairs is shard independent across segment boundaries") {
  const std::uint64_t x = 2 * kSegmentSize + 99;
  for (std::int64_t h : {1, -3}) {
    const auto one = count_pairs(x, PairParams(2, h));
    for (unsigned s : {2u, 5u}) CHECK(count_pairs(x, PairParams(2, h), RangeConvention::UpTo, s) == one);
  }
}

TEST_CASE("count_pairs is non-decreasing in x") {
  std::uint64_t prev = 0;
  for (std::uint64_t x = 1; x <= 400; ++x) {
    const auto c = count_pairs(x, PairParams(2, 1));
    REQUIRE(c >= prev);
    prev = c;
  }
}

TEST_CASE("count_tuple equals naive counting on random systems") {
  for (int trial = 0; trial < 150; ++trial) {
    const unsigned k = static_cast<unsigned>(oracle::uniform(2, 4));
    const auto sys = random_system(k);
    const std::uint64_t x = oracle::uniform(1, 1500);
    REQUIRE(count_tuple(x, sys) == naive_tuple(1, x, k, sys.forms()));
    REQUIRE(count_tuple(x, sys, RangeConvention::Dyadic) == naive_tuple(x + 1, 2 * x, k, sys.forms()));
  }
}

TEST_CASE("count_tuple reduces to count_pairs for (n, n+h)") {
  for (std::int64_t h : {1, 2, -5})
    CHECK(count_tuple(5000, LinearFormSystem::from_pair(PairParams(2, h))) == count_pairs(5000, PairParams(2, h)));
}

TEST_CASE("count_tuple value budget") {
  const LinearFormSystem sys(2, {{1LL << 40, 1}});
  CHECK_THROWS_AS(count_tuple(1ULL << 23, sys), BudgetExceeded);
}

TEST_CASE("rho_pair examples") {
  CHECK(rho_pair(2, PairParams(2, 1)) == 2);
  CHECK(rho_pair(2, PairParams(2, 4)) == 1);
  CHECK(rho_pair(3, PairParams(2, 9)) == 1);
  CHECK_THROWS_AS(rho_pair(4, PairParams(2, 1)), ParameterError);
}

TEST_CASE("local densities agree with residue enumeration") {
  for (int trial = 0; trial < 200; ++trial) {
    const unsigned k = static_cast<unsigned>(oracle::uniform(2, 3));
    const auto sys = random_system(k);
    for (std::uint64_t p : {2, 3, 5, 7, 11}) {
      const auto ref = naive_rho(p, k, sys.forms());
      REQUIRE(rho_tuple(p, sys) == ref);
      REQUIRE(local_density(p, sys) == ref);
    }
  }
  CHECK_THROWS_AS(rho_tuple(101, LinearFormSystem(4, {{1, 0}}), 1000), BudgetExceeded);
}

TEST_CASE("rho is multiplicative on squarefree moduli") {
  for (int trial = 0; trial < 40; ++trial) {
    const auto sys = random_system(2);
    for (std::uint64_t m : {6, 10, 15, 30, 21}) {
      REQUIRE(rho_multiplicative(m, sys) == rho_by_enumeration(m, sys));
    }
  }
  const PairParams pp(2, 1);
  CHECK(rho_multiplicative(30, pp) == 8);
  CHECK(rho_multiplicative(30, pp) == rho_by_enumeration(30, LinearFormSystem::from_pair(pp)));
  CHECK_THROWS_AS(rho_multiplicative(12, pp), ParameterError);
}

TEST_CASE("euler_constant partial products and tail") {
  const PairParams pp(2, 1);
  const auto e = euler_constant(pp, 10);
  // (1 - 2/4)(1 - 2/9)(1 - 2/25)(1 - 2/49)
  CHECK(e.partial == mpq_class(1, 2) * mpq_class(7, 9) * mpq_class(23, 25) * mpq_class(47, 49));
  CHECK(e.tail_bound == mpq_class(1, 5));
  CHECK(e.decimal.rfind("0.3", 0) == 0);

  const auto a = euler_constant(pp, 1000), b = euler_constant(pp, 20000);
  CHECK(b.partial <= a.partial);
  CHECK(a.partial - b.partial <= a.tail_bound);
  // the pair constant is prod (1 - 2/p^2) = 0.3226340989...
  CHECK(a.decimal.rfind("0.322", 0) == 0);
  CHECK_THROWS_AS(euler_constant(pp, 1), ParameterError);
  CHECK_THROWS_AS(euler_constant(LinearFormSystem(2, {{50, 1}}), 10), ParameterError);

  // system form agrees with the pair form
  CHECK(euler_constant(LinearFormSystem::from_pair(pp), 500).partial == euler_constant(pp, 500).partial);
}

TEST_CASE("to_decimal truncates") {
  CHECK(to_decimal(mpq_class(2, 3), 4) == "0.6666");
  CHECK(to_decimal(mpq_class(-1, 8), 2) == "-0.12");
  CHECK(to_decimal(mpq_class(7), 0) == "7");
}

TEST_CASE("Buchstab identity holds exactly on random draws") {
  for (int trial = 0; trial < 60; ++trial) {
    const unsigned k = static_cast<unsigned>(oracle::uniform(2, 3));
    const auto sys = random_system(k);
    const std::uint64_t x = oracle::uniform(10, 3000);
    const double w = static_cast<double>(oracle::uniform(2, 12)) + 0.5;
    const double z = w + static_cast<double>(oracle::uniform(0, 40));
    const auto sides = buchstab_check(x, sys, w, z);
    REQUIRE(sides.lhs == sides.rhs);
  }
  CHECK_THROWS_AS(buchstab_check(10, LinearFormSystem(2, {{1, 0}}), 5, 3), ParameterError);
}

TEST_CASE("xi examples") {
  const auto sys = LinearFormSystem(2, {{1, 0}, {1, 1}});
  // 48 = 2^4 * 3 and 49 = 7^2: primes below 10 whose square divides a value
  CHECK(xi_primes_below(48, sys, 10) == std::vector<std::uint64_t>{2, 7});
  CHECK(sys.prime_divides_xi(2, 48));
  CHECK_FALSE(sys.prime_divides_xi(3, 48));
  CHECK_THROWS_AS(xi_primes_below(0, sys, 10), ParameterError);

  const auto single = LinearFormSystem(2, {{1, 0}});
  CHECK(xi_primes_below(48, single, 10) == std::vector<std::uint64_t>{2});
  // divisors of (xi(48), P(10)) = 2 are 1 and 2; z = 2 keeps only d = 1
  const auto t48 = sieve_lemma_residual(48, single, 10, 2);
  CHECK(t48.exact_lhs == 0);
  CHECK(t48.truncated == 1);
  CHECK(t48.error_count == 1);
  const auto t8 = sieve_lemma_residual(8, single, 10, 100);
  CHECK(t8.truncated == t8.exact_lhs);
  CHECK(t8.error_count == 0);
  const auto t1 = sieve_lemma_residual(7, single, 10, 5);
  CHECK(t1.exact_lhs == 1);
  CHECK(t1.truncated == 1);
  CHECK(t1.error_count == 0);
}

TEST_CASE("Buchstab examples") {
  const auto pair = LinearFormSystem(2, {{1, 0}, {1, 1}});
  auto s = buchstab_check(100, pair, 3, 3);
  CHECK(s.lhs == s.rhs);
  s = buchstab_check(100, pair, 2, 5);
  CHECK(s.lhs == s.rhs);
  s = buchstab_check(50, LinearFormSystem(3, {{1, 0}}), 2, 7);
  CHECK(s.lhs == s.rhs);
  // with z = 2 nothing is sifted
  CHECK(sifted_count(100, pair, 2) == 100);
}

TEST_CASE("local count N(x; m) stays within rho(m) of rho(m) x / m^k") {
  // reported shape check: |#{x < n <= 2x : m^k-divisibility at every p | m} - rho(m) x / m^k| <= rho(m)
  const auto sys = LinearFormSystem(2, {{1, 0}, {1, 1}});
  for (std::uint64_t m : {2, 3, 6, 10, 30}) {
    const std::uint64_t x = 5000;
    std::int64_t count = 0;
    for (std::uint64_t n = x + 1; n <= 2 * x; ++n) {
      bool all = true;
      for (const auto& pp : arith::factorize(m).factors())
        all = all && sys.prime_divides_xi(pp.prime, static_cast<std::int64_t>(n));
      count += all;
    }
    const double rho = static_cast<double>(rho_multiplicative(m, sys));
    const double main = rho * static_cast<double>(x) / static_cast<double>(m * m);
    CHECK(std::abs(static_cast<double>(count) - main) <= rho);
  }
}

TEST_CASE("sieve lemma residual stays within the error count") {
  for (int trial = 0; trial < 300; ++trial) {
    const auto sys = random_system(2);
    const auto n = static_cast<std::int64_t>(oracle::uniform(1, 100000));
    bool zero = false;
    for (const auto& f : sys.forms()) zero = zero || f(n) == 0;
    if (zero) continue;
    const double w = static_cast<double>(oracle::uniform(2, 60));
    const double z = static_cast<double>(oracle::uniform(2, 5000));
    const auto t = sieve_lemma_residual(n, sys, w, z);
    const auto G = xi_primes_below(n, sys, w);
    REQUIRE(t.exact_lhs == (G.empty() ? 1 : 0));
    REQUIRE(std::abs(t.exact_lhs - t.truncated) <= t.error_count);
  }
}
