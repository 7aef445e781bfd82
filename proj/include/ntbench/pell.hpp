#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>
#include <gmpxx.h>

namespace ntbench::pell {

using Real = boost::multiprecision::mpfr_float_50;

/// sqrt(D) = [a0; period, period, ...].
struct CFExpansion {
  std::uint64_t D;
  std::uint64_t a0;
  std::vector<std::uint64_t> period;
};

/// Periodic expansion from the (P, Q) recurrence; nullopt for perfect squares.
/// Requires 2 <= D < 2^62.
std::optional<CFExpansion> cf_sqrt(std::uint64_t D);

/// eps_D = T + U sqrt(D), the least solution of T^2 - D U^2 = 1 above 1.
struct PellFundamental {
  std::uint64_t D;
  mpz_class T;
  mpz_class U;
  Real log_eps;
};

/// Throws ParameterError for square D or D < 2.
PellFundamental fundamental_solution(std::uint64_t D);

/// Same, but stops and returns nullopt as soon as the convergent numerator
/// passes t_limit, i.e. whenever T > t_limit.
std::optional<PellFundamental> fundamental_solution_bounded(std::uint64_t D,
                                                            const mpz_class& t_limit);

/// (T_n, U_n) with T_n + U_n sqrt(D) = (T + U sqrt(D))^n, n >= 0.
std::pair<mpz_class, mpz_class> power(const PellFundamental& f, unsigned n);

/// eps_D^n <= D^beta, decided exactly (beta = p/q >= 0 rational).
bool power_at_most(const PellFundamental& f, unsigned n, const mpq_class& beta);

/// Sum over nonsquare X < D < 2X of #{n >= 1 : eps_D^n <= D^(1/2 + alpha)}.
/// Requires X >= 2 and alpha >= 1/2.
std::uint64_t count_S(std::uint64_t X, const mpq_class& alpha, unsigned shards = 1);

struct Density {
  std::uint64_t count;
  double fraction;
};

/// #{1 < D <= X nonsquare : eps_D <= D^theta} and its ratio to X.
/// Requires X >= 2 and theta >= 0.
Density density_below(std::uint64_t X, const mpq_class& theta, unsigned shards = 1);

}  // namespace ntbench::pell
