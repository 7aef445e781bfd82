#include "ntbench/exact_matrix.hpp"

#include <numeric>

#include "ntbench/errors.hpp"

namespace ntbench {

EchelonForm bareiss_echelon(IntMatrix m) {
  EchelonForm out;
  const std::size_t n_rows = m.size();
  const std::size_t n_cols = n_rows ? m[0].size() : 0;
  std::vector<std::size_t> origin(n_rows);
  std::iota(origin.begin(), origin.end(), std::size_t{0});

  mpz_class prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n_cols && row < n_rows; ++col) {
    std::size_t pivot = row;
    while (pivot < n_rows && m[pivot][col] == 0) ++pivot;
    if (pivot == n_rows) continue;
    std::swap(m[row], m[pivot]);
    std::swap(origin[row], origin[pivot]);
    for (std::size_t i = row + 1; i < n_rows; ++i) {
      for (std::size_t j = col + 1; j < n_cols; ++j) {
        mpz_class num = m[row][col] * m[i][j] - m[i][col] * m[row][j];
        if (!mpz_divisible_p(num.get_mpz_t(), prev.get_mpz_t()))
          throw InvariantViolation("bareiss: inexact division");
        mpz_divexact(m[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][col] = 0;
    }
    prev = m[row][col];
    out.pivot_cols.push_back(col);
    out.pivot_rows.push_back(origin[row]);
    ++row;
  }
  out.rank = row;
  out.rows = std::move(m);
  return out;
}

std::size_t exact_rank(const IntMatrix& m) { return bareiss_echelon(m).rank; }

mpz_class content(const std::vector<mpz_class>& v) {
  mpz_class g = 0;
  for (const auto& c : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

std::optional<std::vector<mpz_class>> integer_null_vector(const IntMatrix& m) {
  if (m.empty()) throw InvariantViolation("integer_null_vector: empty matrix");
  const std::size_t n_cols = m[0].size();
  const EchelonForm ef = bareiss_echelon(m);
  if (ef.rank == n_cols) return std::nullopt;

  std::vector<bool> is_pivot(n_cols, false);
  for (std::size_t c : ef.pivot_cols) is_pivot[c] = true;
  std::size_t free_col = 0;
  while (is_pivot[free_col]) ++free_col;

  std::vector<mpq_class> x(n_cols, 0);
  x[free_col] = 1;
  for (std::size_t r = ef.rank; r-- > 0;) {
    const std::size_t pc = ef.pivot_cols[r];
    mpq_class acc = 0;
    for (std::size_t j = pc + 1; j < n_cols; ++j)
      if (x[j] != 0) acc += mpq_class(ef.rows[r][j]) * x[j];
    x[pc] = -acc / mpq_class(ef.rows[r][pc]);
  }

  mpz_class den = 1;
  for (const auto& q : x) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
  std::vector<mpz_class> v(n_cols);
  for (std::size_t j = 0; j < n_cols; ++j) v[j] = x[j].get_num() * (den / x[j].get_den());
  const mpz_class g = content(v);
  for (auto& c : v) c /= g;
  for (const auto& c : v) {
    if (c == 0) continue;
    if (c < 0)
      for (auto& e : v) e = -e;
    break;
  }
  return v;
}

}  // namespace ntbench
