#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace ntbench::kfree {

/// Which n a count runs over. Headline counts use 1 <= n <= x; the sieve
/// arguments work over the dyadic window x < n <= 2x.
enum class RangeConvention { UpTo, Dyadic };

/// n and n + h both k-free.
struct PairParams {
  unsigned k;
  std::int64_t h;

  PairParams(unsigned k, std::int64_t h);
};

struct LinearForm {
  std::int64_t a;
  std::int64_t b;

  std::int64_t operator()(std::int64_t n) const { return a * n + b; }
};

/// l_i(n) = a_i n + b_i with a_i != 0 and a_i b_j - a_j b_i != 0 for i != j.
class LinearFormSystem {
 public:
  LinearFormSystem(unsigned k, std::vector<LinearForm> forms);

  static LinearFormSystem from_pair(const PairParams& params);

  unsigned k() const { return k_; }
  const std::vector<LinearForm>& forms() const { return forms_; }
  std::size_t r() const { return forms_.size(); }

  /// p^k | l_i(n) for some i (l_i(n) = 0 counts as divisible).
  bool prime_divides_xi(std::uint64_t p, std::int64_t n) const;

 private:
  unsigned k_;
  std::vector<LinearForm> forms_;
};

/// Flags for lo..hi; flag n is set iff n is k-free.
class SieveWindow {
 public:
  SieveWindow(std::uint64_t lo, std::uint64_t hi, unsigned k, std::vector<std::uint8_t> flags);

  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }
  unsigned k() const { return k_; }
  bool is_k_free(std::uint64_t n) const { return flags_[n - lo_] != 0; }
  const std::vector<std::uint8_t>& flags() const { return flags_; }
  std::uint64_t count() const;

 private:
  std::uint64_t lo_, hi_;
  unsigned k_;
  std::vector<std::uint8_t> flags_;
};

inline constexpr std::uint64_t kSegmentSize = std::uint64_t{1} << 20;

/// Segmented sieve: marks multiples of p^k for every prime p <= hi^(1/k),
/// one 2^20-wide segment at a time.
SieveWindow sieve_k_free(std::uint64_t lo, std::uint64_t hi, unsigned k);

/// Number of k-free n in [lo, hi] without materializing the whole window.
std::uint64_t count_k_free(std::uint64_t lo, std::uint64_t hi, unsigned k,
                           unsigned shards = 1);

/// #{lo <= n <= hi : n and n + h k-free}.
std::uint64_t count_pairs_range(std::uint64_t lo, std::uint64_t hi, const PairParams& params,
                                unsigned shards = 1);

/// N_{k,h}(x) over 1 <= n <= x (UpTo) or x < n <= 2x (Dyadic).
std::uint64_t count_pairs(std::uint64_t x, const PairParams& params,
                          RangeConvention conv = RangeConvention::UpTo, unsigned shards = 1);

/// #{lo <= n <= hi : every l_i(n) k-free}, by sieving each form's
/// arithmetic progressions. Throws BudgetExceeded if |l_i(n)| may pass 2^62.
std::uint64_t count_tuple_range(std::uint64_t lo, std::uint64_t hi, const LinearFormSystem& system);
std::uint64_t count_tuple(std::uint64_t x, const LinearFormSystem& system,
                          RangeConvention conv = RangeConvention::UpTo);

/// rho_{k,h}(p): 1 if p^k | h, else 2. Throws ParameterError for composite p.
unsigned rho_pair(std::uint64_t p, const PairParams& params);

inline constexpr std::uint64_t kRhoEnumerationBudget = 10'000'000;

/// #{n mod p^k : p^k | l_i(n) for some i}, by enumerating residues.
/// Throws BudgetExceeded when p^k > budget.
std::uint64_t rho_tuple(std::uint64_t p, const LinearFormSystem& system,
                        std::uint64_t budget = kRhoEnumerationBudget);

/// Same quantity as rho_tuple without enumeration: for p not dividing any
/// a_i every form kills one class, and two classes coincide iff
/// p^k | a_i b_j - a_j b_i. Falls back to rho_tuple when p | a_i.
std::uint64_t local_density(std::uint64_t p, const LinearFormSystem& system);

/// rho(m) = prod_{p | m} rho(p) for squarefree m. Throws ParameterError otherwise.
std::uint64_t rho_multiplicative(std::uint64_t m, const PairParams& params);
std::uint64_t rho_multiplicative(std::uint64_t m, const LinearFormSystem& system);

/// #{n mod m^k : p^k | l_i(n) for some i, for every p | m}; direct enumeration.
std::uint64_t rho_by_enumeration(std::uint64_t m, const LinearFormSystem& system,
                                 std::uint64_t budget = kRhoEnumerationBudget);

/// Truncated Euler product prod_{p <= P} (1 - rho(p)/p^k) with a certified
/// tail: the full product lies in [partial - tail_bound, partial].
struct EulerConstantEstimate {
  mpq_class partial;
  std::uint64_t cutoff;
  mpq_class tail_bound;
  std::string decimal;
};

/// tail_bound = r * P^(1-k) / (k-1), from sum_{p > P} rho(p)/p^k <=
/// r * integral_P^inf t^-k dt, using rho(p) <= r once p exceeds every |a_i|.
/// Throws ParameterError for P < 2 or P < max |a_i|.
EulerConstantEstimate euler_constant(const PairParams& params, std::uint64_t cutoff);
EulerConstantEstimate euler_constant(const LinearFormSystem& system, std::uint64_t cutoff);

/// Fixed-point decimal of a rational, truncated (not rounded) to `digits`.
std::string to_decimal(const mpq_class& q, unsigned digits);

/// Both sides of S(z) = S(w) - sum_{w <= p < z} S_p(p) over x < n <= 2x,
/// each evaluated straight from its definition.
struct BuchstabSides {
  std::int64_t lhs;
  std::int64_t rhs;
};
BuchstabSides buchstab_check(std::uint64_t x, const LinearFormSystem& system, double w, double z);

/// S(z) = #{x < n <= 2x : (xi(n), P(z)) = 1}.
std::int64_t sifted_count(std::uint64_t x, const LinearFormSystem& system, double z);
/// S_d(w) = #{x < n <= 2x : d | xi(n), (xi(n), P(w)) = 1}, d squarefree.
std::int64_t sifted_count_divisible(std::uint64_t x, const LinearFormSystem& system,
                                    std::uint64_t d, double w);

/// Terms of the fundamental sieve lemma for one n with G = (xi(n), P(w)):
/// exact = sum_{d | G} mu(d), truncated = same over d < z,
/// error_count = #{d | G : z <= d < z w}.
struct SieveLemmaTerms {
  std::int64_t exact_lhs;
  std::int64_t truncated;
  std::int64_t error_count;
};
/// Throws ParameterError if some l_i(n) = 0 (xi(n) undefined).
SieveLemmaTerms sieve_lemma_residual(std::int64_t n, const LinearFormSystem& system, double w,
                                     double z);

/// Primes p < w with p^k | l_i(n) for some i; the prime support of (xi(n), P(w)).
std::vector<std::uint64_t> xi_primes_below(std::int64_t n, const LinearFormSystem& system,
                                           double w);

}  // namespace ntbench::kfree
