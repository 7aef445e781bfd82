#pragma once

#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "ntbench/surd.hpp"

namespace ntbench::analysis {

struct ExponentEntry {
  std::string name;
  Surd value;
  std::string decimal;  // truncated to 12 places
};

struct ExponentReport {
  std::string label;
  std::vector<ExponentEntry> entries;
  std::vector<std::pair<std::string, bool>> comparisons;
  std::string note;  // the epsilon / delta terms are dropped from every exponent

  const ExponentEntry& at(const std::string& name) const;
};

/// omega(k): (26 + sqrt 433)/81 for k = 2, 169/(144k) for k >= 3.
Surd omega(unsigned k);

/// omega, the earlier bounds prior_pair 14/(7k+8) and prior_large_k 14/(9k), trivial 2/(k+1),
/// tuple 3/(2k+1). Throws InvariantViolation if omega <= prior_pair or
/// omega < prior_large_k fails; the k > 4 boundary for 14/(9k) < 14/(7k+8)
/// is recorded as a comparison rather than asserted.
ExponentReport exponent_table(unsigned k);

/// (1/2) min(psi, 2 - k psi) + (9/16) psi (2 - k psi), 0 <= psi <= 2/k.
mpq_class f_psi(unsigned k, const mpq_class& psi);

/// Where f_k peaks: 2/3 for k = 2, 13/(9k) for k >= 3.
mpq_class f_psi_argmax(unsigned k);

/// max((9/16) alpha/(alpha + 1/2) + (1/2) min(1, alpha), 1/2 + alpha/5), alpha >= 1/2.
mpq_class pell_bound(const mpq_class& alpha);

/// (1/2) min(psi, 1 - 3 psi/2) + (1/2) max((9/8) psi (1 - 3 psi/2), 9/50), 0 <= psi <= 2/3.
mpq_class squarefull_f(const mpq_class& psi);

/// psi_c = (55 - sqrt 433)/54 and the two branches of the k = 2 line-count
/// objective there: 1 - 2 psi/3 and (9/8) psi (1 - psi) + psi/2.
struct CriticalPsi {
  Surd psi;
  Surd linear_branch;
  Surd quadratic_branch;
  bool matches_omega;
};
CriticalPsi critical_psi();

struct FitResult {
  double slope;
  double intercept;
  double residual;  // sum of squared residuals in log space
  std::size_t n_samples;
};

/// Least squares line through (ln x, ln y). Throws ParameterError for fewer
/// than two samples, non-positive values, or all x equal.
FitResult fit_exponent(const std::vector<std::pair<double, double>>& samples);

/// Decimal string parsed as an exact rational ("0.5" -> 1/2, "-3/4" also accepted).
mpq_class parse_rational(const std::string& text);

}  // namespace ntbench::analysis
