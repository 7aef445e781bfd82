#include "ntbench/lattice.hpp"

#include <utility>

#include "ntbench/errors.hpp"

namespace ntbench {

mpq_class dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
mpq_class norm2(const Vec2& a) { return dot(a, a); }

namespace {

// Nearest integer, halves rounded down.
mpz_class round_nearest(const mpq_class& q) {
  mpq_class shifted = q + mpq_class(1, 2);
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  return r;
}

}  // namespace

GaussReduction gauss_reduce(const Vec2& b1, const Vec2& b2) {
  if (b1.x * b2.y - b1.y * b2.x == 0) throw ParameterError("gauss_reduce: dependent basis");
  GaussReduction r{b1, b2, {1, 0}, {0, 1}};
  for (;;) {
    if (norm2(r.g2) < norm2(r.g1)) {
      std::swap(r.g1, r.g2);
      std::swap(r.h1, r.h2);
    }
    const mpz_class mu = round_nearest(dot(r.g1, r.g2) / norm2(r.g1));
    if (mu == 0) break;
    const mpq_class m(mu);
    r.g2.x -= m * r.g1.x;
    r.g2.y -= m * r.g1.y;
    r.h2[0] -= mu * r.h1[0];
    r.h2[1] -= mu * r.h1[1];
  }
  return r;
}

}  // namespace ntbench
