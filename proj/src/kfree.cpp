#include "ntbench/kfree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>

#include "ntbench/arith.hpp"
#include "ntbench/errors.hpp"
#include "ntbench/parallel.hpp"
#include "ntbench/primes.hpp"

namespace ntbench::kfree {

using arith::checked_pow;

namespace {

using i128 = __int128;

std::uint64_t abs_u64(std::int64_t v) {
  return v < 0 ? 0 - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
}

// Clears the flag of every multiple of p^k in [seg_lo, seg_lo + flags.size()).
void mark_segment(std::uint64_t seg_lo, std::span<std::uint8_t> flags, unsigned k,
                  std::span<const std::uint64_t> primes) {
  std::fill(flags.begin(), flags.end(), std::uint8_t{1});
  const std::uint64_t seg_hi = seg_lo + flags.size() - 1;
  for (std::uint64_t p : primes) {
    const auto q = checked_pow(p, k, seg_hi);
    if (!q) break;
    std::uint64_t start = (seg_lo + *q - 1) / *q * *q;
    for (std::uint64_t n = start; n <= seg_hi; n += *q) flags[n - seg_lo] = 0;
  }
}

std::vector<std::uint64_t> sieving_primes(std::uint64_t hi, unsigned k) {
  return primes_up_to(arith::integer_root(hi, k));
}

void require_k(unsigned k) {
  if (k < 2) throw ParameterError("k must be >= 2");
}

i128 mod_inverse(i128 a, i128 m) {
  i128 g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
  // Invariant: x1 * a == a1 (mod m), x * a == g (mod m).
  while (a1 != 0) {
    const i128 q = g / a1;
    std::swap(g, a1);
    a1 -= q * g;
    std::swap(x, x1);
    x1 -= q * x;
  }
  return ((x % m) + m) % m;
}

mpz_class tree_product(std::vector<mpz_class>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 0) return 1;
  if (hi - lo == 1) return v[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return tree_product(v, lo, mid) * tree_product(v, mid, hi);
}

}  // namespace

PairParams::PairParams(unsigned k_, std::int64_t h_) : k(k_), h(h_) {
  require_k(k);
  if (h == 0) throw ParameterError("PairParams: h must be nonzero");
}

LinearFormSystem::LinearFormSystem(unsigned k, std::vector<LinearForm> forms)
    : k_(k), forms_(std::move(forms)) {
  require_k(k_);
  if (forms_.empty()) throw ParameterError("LinearFormSystem: need at least one form");
  for (std::size_t i = 0; i < forms_.size(); ++i) {
    if (forms_[i].a == 0) throw ParameterError("LinearFormSystem: a_i must be nonzero");
    for (std::size_t j = 0; j < i; ++j) {
      const i128 det = i128{forms_[i].a} * forms_[j].b - i128{forms_[j].a} * forms_[i].b;
      if (det == 0) throw ParameterError("LinearFormSystem: a_i b_j - a_j b_i must be nonzero");
    }
  }
}

LinearFormSystem LinearFormSystem::from_pair(const PairParams& params) {
  return LinearFormSystem(params.k, {{1, 0}, {1, params.h}});
}

bool LinearFormSystem::prime_divides_xi(std::uint64_t p, std::int64_t n) const {
  const auto q = checked_pow(p, k_, std::uint64_t{1} << 63);
  for (const auto& f : forms_) {
    const i128 v = i128{f.a} * n + f.b;
    if (v == 0) return true;
    if (q && v % static_cast<i128>(*q) == 0) return true;
  }
  return false;
}

SieveWindow::SieveWindow(std::uint64_t lo, std::uint64_t hi, unsigned k,
                         std::vector<std::uint8_t> flags)
    : lo_(lo), hi_(hi), k_(k), flags_(std::move(flags)) {}

std::uint64_t SieveWindow::count() const {
  return static_cast<std::uint64_t>(std::count(flags_.begin(), flags_.end(), std::uint8_t{1}));
}

SieveWindow sieve_k_free(std::uint64_t lo, std::uint64_t hi, unsigned k) {
  require_k(k);
  if (lo == 0) throw ParameterError("sieve_k_free: lo must be positive");
  if (lo > hi) throw ParameterError("sieve_k_free: empty range (lo > hi)");
  const auto primes = sieving_primes(hi, k);
  std::vector<std::uint8_t> flags(hi - lo + 1);
  for (std::uint64_t a = lo; a <= hi;) {
    const std::uint64_t b = std::min(hi, a + kSegmentSize - 1);
    mark_segment(a, std::span(flags).subspan(a - lo, b - a + 1), k, primes);
    if (b == hi) break;
    a = b + 1;
  }
  return SieveWindow(lo, hi, k, std::move(flags));
}

std::uint64_t count_k_free(std::uint64_t lo, std::uint64_t hi, unsigned k, unsigned shards) {
  require_k(k);
  if (lo == 0) throw ParameterError("count_k_free: lo must be positive");
  if (lo > hi) throw ParameterError("count_k_free: empty range (lo > hi)");
  const auto primes = sieving_primes(hi, k);
  return sharded_sum(lo, hi, shards, [&](std::uint64_t a0, std::uint64_t b0) {
    std::vector<std::uint8_t> buf(std::min(kSegmentSize, b0 - a0 + 1));
    std::uint64_t total = 0;
    for (std::uint64_t a = a0; a <= b0;) {
      const std::uint64_t b = std::min(b0, a + kSegmentSize - 1);
      auto seg = std::span(buf).first(b - a + 1);
      mark_segment(a, seg, k, primes);
      total += static_cast<std::uint64_t>(std::count(seg.begin(), seg.end(), std::uint8_t{1}));
      if (b == b0) break;
      a = b + 1;
    }
    return total;
  });
}

std::uint64_t count_pairs_range(std::uint64_t lo, std::uint64_t hi, const PairParams& params,
                                unsigned shards) {
  if (lo == 0) throw ParameterError("count_pairs: n range must start at 1 or above");
  if (lo > hi) return 0;
  const std::int64_t h = params.h;
  const unsigned k = params.k;
  std::uint64_t total = 0;

  // n + h <= 0 happens only for n <= -h; those few n are checked directly.
  std::uint64_t first_sieved = lo;
  if (h < 0) {
    const std::uint64_t last_direct = std::min<std::uint64_t>(hi, abs_u64(h));
    for (std::uint64_t n = lo; n <= last_direct; ++n) {
      if (arith::is_k_free(n, k) && arith::is_k_free_signed(static_cast<std::int64_t>(n) + h, k))
        ++total;
    }
    first_sieved = std::max(lo, last_direct + 1);
  }
  if (first_sieved > hi) return total;

  const std::uint64_t top = h > 0 ? hi + static_cast<std::uint64_t>(h) : hi;
  const auto primes = sieving_primes(top, k);
  const std::uint64_t habs = abs_u64(h);
  total += sharded_sum(first_sieved, hi, shards, [&](std::uint64_t a0, std::uint64_t b0) {
    std::vector<std::uint8_t> buf(std::min(kSegmentSize, b0 - a0 + 1) + habs);
    std::uint64_t count = 0;
    for (std::uint64_t a = a0; a <= b0;) {
      const std::uint64_t b = std::min(b0, a + kSegmentSize - 1);
      const std::uint64_t w_lo = h < 0 ? a - habs : a;
      const std::uint64_t w_hi = h > 0 ? b + habs : b;
      auto seg = std::span(buf).first(w_hi - w_lo + 1);
      mark_segment(w_lo, seg, k, primes);
      for (std::uint64_t n = a; n <= b; ++n) {
        const std::uint64_t m = static_cast<std::uint64_t>(static_cast<std::int64_t>(n) + h);
        count += seg[n - w_lo] & seg[m - w_lo];
      }
      if (b == b0) break;
      a = b + 1;
    }
    return count;
  });
  return total;
}

std::uint64_t count_pairs(std::uint64_t x, const PairParams& params, RangeConvention conv,
                          unsigned shards) {
  if (x == 0) throw ParameterError("count_pairs: x must be positive");
  return conv == RangeConvention::UpTo ? count_pairs_range(1, x, params, shards)
                                       : count_pairs_range(x + 1, 2 * x, params, shards);
}

std::uint64_t count_tuple_range(std::uint64_t lo, std::uint64_t hi, const LinearFormSystem& system) {
  if (lo == 0) throw ParameterError("count_tuple: n range must start at 1 or above");
  if (lo > hi) return 0;
  const unsigned k = system.k();
  constexpr i128 kValueLimit = i128{1} << 62;

  struct Progression {
    std::uint64_t modulus;
    std::uint64_t residue;
  };
  std::vector<Progression> progressions;
  std::vector<std::uint64_t> zeros;  // n with some l_i(n) = 0

  for (const auto& f : system.forms()) {
    const i128 v_lo = i128{f.a} * static_cast<i128>(lo) + f.b;
    const i128 v_hi = i128{f.a} * static_cast<i128>(hi) + f.b;
    const i128 max_abs = std::max(v_lo < 0 ? -v_lo : v_lo, v_hi < 0 ? -v_hi : v_hi);
    if (max_abs > kValueLimit) throw BudgetExceeded("count_tuple: |l_i(n)| exceeds 2^62");
    if (f.b % f.a == 0) {
      const std::int64_t n0 = -f.b / f.a;
      if (n0 >= 0 && static_cast<std::uint64_t>(n0) >= lo && static_cast<std::uint64_t>(n0) <= hi)
        zeros.push_back(static_cast<std::uint64_t>(n0));
    }
    const auto bound = static_cast<std::uint64_t>(max_abs);
    for (std::uint64_t p : primes_up_to(arith::integer_root(bound, k))) {
      const std::uint64_t q = *checked_pow(p, k);
      // Solve a n == -b (mod q); g = gcd(a, q) must divide b.
      const i128 a_mod = ((i128{f.a} % q) + q) % q;
      const std::uint64_t g = std::gcd(static_cast<std::uint64_t>(a_mod), q);
      if (((i128{f.b} % g) + g) % g != 0) continue;
      const std::uint64_t q2 = q / g;
      const i128 a2 = (i128{f.a} / static_cast<i128>(g)) % q2;
      const i128 b2 = (i128{f.b} / static_cast<i128>(g)) % q2;
      const i128 inv = q2 == 1 ? 0 : mod_inverse(a2, q2);
      i128 res = q2 == 1 ? 0 : ((-b2 % q2 + q2) % q2) * inv % q2;
      progressions.push_back({q2, static_cast<std::uint64_t>(res)});
    }
  }

  std::vector<std::uint8_t> buf(std::min(kSegmentSize, hi - lo + 1));
  std::uint64_t total = 0;
  for (std::uint64_t a = lo; a <= hi;) {
    const std::uint64_t b = std::min(hi, a + kSegmentSize - 1);
    auto seg = std::span(buf).first(b - a + 1);
    std::fill(seg.begin(), seg.end(), std::uint8_t{1});
    for (const auto& pr : progressions) {
      const std::uint64_t offset = (pr.residue + pr.modulus - a % pr.modulus) % pr.modulus;
      for (std::uint64_t n = a + offset; n <= b; n += pr.modulus) seg[n - a] = 0;
    }
    for (std::uint64_t z : zeros)
      if (z >= a && z <= b) seg[z - a] = 0;
    total += static_cast<std::uint64_t>(std::count(seg.begin(), seg.end(), std::uint8_t{1}));
    if (b == hi) break;
    a = b + 1;
  }
  return total;
}

std::uint64_t count_tuple(std::uint64_t x, const LinearFormSystem& system, RangeConvention conv) {
  if (x == 0) throw ParameterError("count_tuple: x must be positive");
  return conv == RangeConvention::UpTo ? count_tuple_range(1, x, system)
                                       : count_tuple_range(x + 1, 2 * x, system);
}

unsigned rho_pair(std::uint64_t p, const PairParams& params) {
  if (!arith::is_prime(p)) throw ParameterError("rho_pair: p must be prime");
  const auto q = checked_pow(p, params.k);
  if (!q) return 2;
  return abs_u64(params.h) % *q == 0 ? 1 : 2;
}

std::uint64_t rho_tuple(std::uint64_t p, const LinearFormSystem& system, std::uint64_t budget) {
  if (!arith::is_prime(p)) throw ParameterError("rho_tuple: p must be prime");
  const auto q = checked_pow(p, system.k(), budget);
  if (!q) throw BudgetExceeded("rho_tuple: p^k exceeds the enumeration budget");
  const i128 mod = *q;
  std::uint64_t count = 0;
  for (std::uint64_t n = 0; n < *q; ++n) {
    for (const auto& f : system.forms()) {
      if ((i128{f.a} * n + f.b) % mod == 0) {
        ++count;
        break;
      }
    }
  }
  return count;
}

std::uint64_t local_density(std::uint64_t p, const LinearFormSystem& system) {
  if (!arith::is_prime(p)) throw ParameterError("local_density: p must be prime");
  const auto& forms = system.forms();
  for (const auto& f : forms)
    if (abs_u64(f.a) % p == 0) return rho_tuple(p, system);
  const auto q = checked_pow(p, system.k(), std::uint64_t{1} << 63);
  std::uint64_t classes = 0;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    bool repeated = false;
    for (std::size_t j = 0; j < i && q; ++j) {
      const i128 det = i128{forms[i].a} * forms[j].b - i128{forms[j].a} * forms[i].b;
      if (det % static_cast<i128>(*q) == 0) {
        repeated = true;
        break;
      }
    }
    if (!repeated) ++classes;
  }
  return classes;
}

namespace {

arith::Factorization squarefree_factors(std::uint64_t m, const char* who) {
  const auto f = arith::factorize(m);
  if (f.max_exponent() > 1) throw ParameterError(std::string(who) + ": m must be squarefree");
  return f;
}

}  // namespace

std::uint64_t rho_multiplicative(std::uint64_t m, const PairParams& params) {
  std::uint64_t r = 1;
  for (const auto& pp : squarefree_factors(m, "rho_multiplicative").factors())
    r *= rho_pair(pp.prime, params);
  return r;
}

std::uint64_t rho_multiplicative(std::uint64_t m, const LinearFormSystem& system) {
  std::uint64_t r = 1;
  for (const auto& pp : squarefree_factors(m, "rho_multiplicative").factors())
    r *= local_density(pp.prime, system);
  return r;
}

std::uint64_t rho_by_enumeration(std::uint64_t m, const LinearFormSystem& system,
                                 std::uint64_t budget) {
  const auto f = squarefree_factors(m, "rho_by_enumeration");
  const auto mk = checked_pow(m, system.k(), budget);
  if (!mk) throw BudgetExceeded("rho_by_enumeration: m^k exceeds the enumeration budget");
  std::uint64_t count = 0;
  for (std::uint64_t n = 0; n < *mk; ++n) {
    bool all = true;
    for (const auto& pp : f.factors()) {
      if (!system.prime_divides_xi(pp.prime, static_cast<std::int64_t>(n))) {
        all = false;
        break;
      }
    }
    if (all) ++count;
  }
  return count;
}

namespace {

template <class Rho>
EulerConstantEstimate euler_product(unsigned k, std::size_t r, std::uint64_t cutoff, Rho rho) {
  std::vector<mpz_class> nums, dens;
  for (std::uint64_t p : primes_up_to(cutoff)) {
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), p, k);
    nums.push_back(pk - rho(p));
    dens.push_back(std::move(pk));
  }
  EulerConstantEstimate est;
  est.cutoff = cutoff;
  est.partial = mpq_class(tree_product(nums, 0, nums.size()), tree_product(dens, 0, dens.size()));
  est.partial.canonicalize();
  mpz_class pk1;
  mpz_ui_pow_ui(pk1.get_mpz_t(), cutoff, k - 1);
  est.tail_bound = mpq_class(mpz_class(static_cast<unsigned long>(r)), pk1 * (k - 1));
  est.tail_bound.canonicalize();
  est.decimal = to_decimal(est.partial, 20);
  return est;
}

}  // namespace

EulerConstantEstimate euler_constant(const PairParams& params, std::uint64_t cutoff) {
  if (cutoff < 2) throw ParameterError("euler_constant: cutoff must be >= 2");
  return euler_product(params.k, 2, cutoff,
                       [&](std::uint64_t p) { return static_cast<unsigned long>(rho_pair(p, params)); });
}

EulerConstantEstimate euler_constant(const LinearFormSystem& system, std::uint64_t cutoff) {
  if (cutoff < 2) throw ParameterError("euler_constant: cutoff must be >= 2");
  for (const auto& f : system.forms()) {
    if (abs_u64(f.a) > cutoff)
      throw ParameterError("euler_constant: cutoff must be >= max |a_i| for the tail bound");
  }
  return euler_product(system.k(), system.r(), cutoff, [&](std::uint64_t p) {
    return static_cast<unsigned long>(local_density(p, system));
  });
}

std::string to_decimal(const mpq_class& q, unsigned digits) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  const mpz_class num = abs(q.get_num());
  const mpz_class scaled = num * scale / q.get_den();
  std::string s = scaled.get_str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  std::string out = s.substr(0, s.size() - digits);
  if (digits > 0) out += "." + s.substr(s.size() - digits);
  if (q < 0) out.insert(0, "-");
  return out;
}

namespace {

std::vector<std::uint64_t> primes_below(double z) {
  if (z <= 2) return {};
  auto ps = primes_up_to(static_cast<std::uint64_t>(std::ceil(z)));
  std::erase_if(ps, [z](std::uint64_t p) { return !(static_cast<double>(p) < z); });
  return ps;
}

bool coprime_to_primorial(std::int64_t n, const LinearFormSystem& system,
                          std::span<const std::uint64_t> primes) {
  for (std::uint64_t p : primes)
    if (system.prime_divides_xi(p, n)) return false;
  return true;
}

}  // namespace

std::int64_t sifted_count(std::uint64_t x, const LinearFormSystem& system, double z) {
  const auto primes = primes_below(z);
  std::int64_t count = 0;
  for (std::uint64_t n = x + 1; n <= 2 * x; ++n)
    if (coprime_to_primorial(static_cast<std::int64_t>(n), system, primes)) ++count;
  return count;
}

std::int64_t sifted_count_divisible(std::uint64_t x, const LinearFormSystem& system,
                                    std::uint64_t d, double w) {
  const auto df = squarefree_factors(d, "sifted_count_divisible");
  const auto primes = primes_below(w);
  std::int64_t count = 0;
  for (std::uint64_t n = x + 1; n <= 2 * x; ++n) {
    const auto sn = static_cast<std::int64_t>(n);
    bool divisible = true;
    for (const auto& pp : df.factors()) {
      if (!system.prime_divides_xi(pp.prime, sn)) {
        divisible = false;
        break;
      }
    }
    if (divisible && coprime_to_primorial(sn, system, primes)) ++count;
  }
  return count;
}

BuchstabSides buchstab_check(std::uint64_t x, const LinearFormSystem& system, double w, double z) {
  if (!(w > 1.0) || !(w <= z)) throw ParameterError("buchstab_check: need 1 < w <= z");
  BuchstabSides sides;
  sides.lhs = sifted_count(x, system, z);
  sides.rhs = sifted_count(x, system, w);
  for (std::uint64_t p : primes_below(z)) {
    if (static_cast<double>(p) < w) continue;
    sides.rhs -= sifted_count_divisible(x, system, p, static_cast<double>(p));
  }
  return sides;
}

std::vector<std::uint64_t> xi_primes_below(std::int64_t n, const LinearFormSystem& system,
                                           double w) {
  std::vector<std::uint64_t> primes;
  for (const auto& f : system.forms()) {
    const i128 v = i128{f.a} * n + f.b;
    if (v == 0) throw ParameterError("xi(n) is undefined when some l_i(n) = 0");
    const i128 mag = v < 0 ? -v : v;
    if (mag > static_cast<i128>(UINT64_MAX)) throw BudgetExceeded("xi: |l_i(n)| exceeds 64 bits");
    for (const auto& pp : arith::factorize(static_cast<std::uint64_t>(mag)).factors()) {
      if (pp.exponent >= system.k() && static_cast<double>(pp.prime) < w) primes.push_back(pp.prime);
    }
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return primes;
}

SieveLemmaTerms sieve_lemma_residual(std::int64_t n, const LinearFormSystem& system, double w,
                                     double z) {
  if (!(w > 1.0) || !(z > 1.0)) throw ParameterError("sieve_lemma_residual: need w, z > 1");
  const auto primes = xi_primes_below(n, system, w);
  if (primes.size() > 40) throw BudgetExceeded("sieve_lemma_residual: too many divisors");
  const long double zl = z, zw = static_cast<long double>(z) * w;
  SieveLemmaTerms t{0, 0, 0};
  const std::uint64_t subsets = std::uint64_t{1} << primes.size();
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    long double d = 1;
    int mu = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (mask >> i & 1) {
        d *= static_cast<long double>(primes[i]);
        mu = -mu;
      }
    }
    t.exact_lhs += mu;
    if (d < zl) t.truncated += mu;
    if (d >= zl && d < zw) ++t.error_count;
  }
  return t;
}

}  // namespace ntbench::kfree
