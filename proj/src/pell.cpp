#include "ntbench/pell.hpp"

#include "ntbench/arith.hpp"
#include "ntbench/errors.hpp"
#include "ntbench/parallel.hpp"

namespace ntbench::pell {

namespace {

Real to_real(const mpz_class& z) {
  Real r;
  mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

Real log_of(const mpz_class& T, const mpz_class& U, std::uint64_t D) {
  using boost::multiprecision::log;
  using boost::multiprecision::sqrt;
  return log(to_real(T) + to_real(U) * sqrt(Real(D)));
}

bool is_square(std::uint64_t D) {
  const std::uint64_t r = arith::integer_root(D, 2);
  return r * r == D;
}

void check_D(std::uint64_t D) {
  if (D < 2) throw ParameterError("pell: D must be >= 2");
  if (D >= (std::uint64_t{1} << 62)) throw ParameterError("pell: D must be below 2^62");
  if (is_square(D)) throw ParameterError("pell: D is a perfect square");
}

// Walks the convergents h/k of sqrt(D) until h^2 - D k^2 = 1, which happens at
// the end of the first period (even length) or second period (odd length).
std::optional<PellFundamental> solve(std::uint64_t D, const mpz_class* t_limit) {
  check_D(D);
  const std::uint64_t a0 = arith::integer_root(D, 2);
  std::uint64_t P = 0, Q = 1, a = a0;
  mpz_class h_prev = 1, h = a0, k_prev = 0, k = 1;
  for (;;) {
    if (t_limit && h > *t_limit) return std::nullopt;
    if (h * h - k * k * D == 1) break;
    P = a * Q - P;
    Q = (D - P * P) / Q;
    a = (a0 + P) / Q;
    mpz_class h_next = h * a + h_prev;
    mpz_class k_next = k * a + k_prev;
    h_prev = std::move(h);
    h = std::move(h_next);
    k_prev = std::move(k);
    k = std::move(k_next);
  }
  PellFundamental f{D, h, k, log_of(h, k, D)};
  return f;
}

mpz_class pow_z(std::uint64_t base, unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

// T + U sqrt(D) <= N for T, U >= 0, decided in integers.
bool surd_at_most(const mpz_class& T, const mpz_class& U, std::uint64_t D, const mpz_class& N) {
  if (N < T) return false;
  const mpz_class slack = N - T;
  return U * U * D <= slack * slack;
}

// Largest n >= 0 with eps^n <= D^beta, using the 50-digit estimate and
// switching to exact powers when the estimate sits near an integer.
std::uint64_t max_power(const PellFundamental& f, const mpq_class& beta) {
  const Real ratio = Real(to_real(beta.get_num()) / to_real(beta.get_den())) *
                     boost::multiprecision::log(Real(f.D)) / f.log_eps;
  const Real fl = boost::multiprecision::floor(ratio + Real("0.5"));
  if (boost::multiprecision::abs(ratio - fl) > Real("1e-30"))
    return static_cast<std::uint64_t>(boost::multiprecision::floor(ratio));
  const auto m = static_cast<unsigned>(fl);
  if (m == 0) return 0;
  return power_at_most(f, m, beta) ? m : m - 1;
}

mpz_class t_limit_for(std::uint64_t D, const mpq_class& beta) {
  // T < eps <= D^beta, so T <= floor(D^beta) + 1 is a safe cutoff.
  const Real bound = boost::multiprecision::pow(
      Real(D), Real(to_real(beta.get_num()) / to_real(beta.get_den())));
  mpz_class t;
  mpfr_get_z(t.get_mpz_t(), bound.backend().data(), MPFR_RNDU);
  return t + 1;
}

}  // namespace

std::optional<CFExpansion> cf_sqrt(std::uint64_t D) {
  if (D < 2) throw ParameterError("cf_sqrt: D must be >= 2");
  if (D >= (std::uint64_t{1} << 62)) throw ParameterError("cf_sqrt: D must be below 2^62");
  if (is_square(D)) return std::nullopt;
  CFExpansion cf{D, arith::integer_root(D, 2), {}};
  std::uint64_t P = 0, Q = 1, a = cf.a0;
  // The period ends at the first partial quotient equal to 2 a0.
  do {
    P = a * Q - P;
    Q = (D - P * P) / Q;
    a = (cf.a0 + P) / Q;
    cf.period.push_back(a);
  } while (a != 2 * cf.a0);
  return cf;
}

PellFundamental fundamental_solution(std::uint64_t D) { return *solve(D, nullptr); }

std::optional<PellFundamental> fundamental_solution_bounded(std::uint64_t D,
                                                            const mpz_class& t_limit) {
  return solve(D, &t_limit);
}

std::pair<mpz_class, mpz_class> power(const PellFundamental& f, unsigned n) {
  mpz_class T = 1, U = 0, bT = f.T, bU = f.U;
  while (n > 0) {
    if (n & 1) {
      mpz_class t = T * bT + f.D * U * bU;
      U = T * bU + U * bT;
      T = std::move(t);
    }
    n >>= 1;
    if (n > 0) {
      mpz_class t = bT * bT + f.D * bU * bU;
      bU = 2 * bT * bU;
      bT = std::move(t);
    }
  }
  return {T, U};
}

bool power_at_most(const PellFundamental& f, unsigned n, const mpq_class& beta) {
  if (beta < 0) throw ParameterError("power_at_most: beta must be >= 0");
  mpq_class b = beta;
  b.canonicalize();
  // eps^n <= D^(p/q)  <=>  eps^(n q) <= D^p.
  if (!b.get_den().fits_ulong_p() || !b.get_num().fits_ulong_p())
    throw BudgetExceeded("power_at_most: beta has an oversized numerator or denominator");
  const auto q = b.get_den().get_ui();
  const auto p = b.get_num().get_ui();
  const auto [T, U] = power(f, static_cast<unsigned>(n * q));
  return surd_at_most(T, U, f.D, pow_z(f.D, p));
}

std::uint64_t count_S(std::uint64_t X, const mpq_class& alpha, unsigned shards) {
  if (X < 2) throw ParameterError("count_S: X must be >= 2");
  if (alpha < mpq_class(1, 2)) throw ParameterError("count_S: alpha must be >= 1/2");
  const mpq_class beta = mpq_class(1, 2) + alpha;
  return sharded_sum(X + 1, 2 * X - 1, shards, [&](std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t total = 0;
    for (std::uint64_t D = lo; D <= hi; ++D) {
      if (is_square(D)) continue;
      const auto f = fundamental_solution_bounded(D, t_limit_for(D, beta));
      if (f) total += max_power(*f, beta);
    }
    return total;
  });
}

Density density_below(std::uint64_t X, const mpq_class& theta, unsigned shards) {
  if (X < 2) throw ParameterError("density_below: X must be >= 2");
  if (theta < 0) throw ParameterError("density_below: theta must be >= 0");
  const std::uint64_t count = sharded_sum(2, X, shards, [&](std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t total = 0;
    for (std::uint64_t D = lo; D <= hi; ++D) {
      if (is_square(D)) continue;
      const auto f = fundamental_solution_bounded(D, t_limit_for(D, theta));
      if (f && max_power(*f, theta) >= 1) ++total;
    }
    return total;
  });
  return {count, static_cast<double>(count) / static_cast<double>(X)};
}

}  // namespace ntbench::pell
