#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <gmpxx.h>

namespace ntbench {

using IntMatrix = std::vector<std::vector<mpz_class>>;

/// Row echelon data from fraction-free (Bareiss) elimination. pivot_rows are
/// indices into the original matrix; together with pivot_cols they pick out a
/// nonsingular rank x rank minor.
struct EchelonForm {
  IntMatrix rows;  // eliminated matrix, rows permuted
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
  std::vector<std::size_t> pivot_rows;
};

EchelonForm bareiss_echelon(IntMatrix m);
std::size_t exact_rank(const IntMatrix& m);

/// A nonzero integer vector c with m c = 0, content 1 and first nonzero entry
/// positive; nullopt when the columns are independent. Built by back
/// substitution over Q with the first free column set to 1.
std::optional<std::vector<mpz_class>> integer_null_vector(const IntMatrix& m);

mpz_class content(const std::vector<mpz_class>& v);

}  // namespace ntbench
