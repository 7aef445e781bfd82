#pragma once

#include <array>

#include <gmpxx.h>

namespace ntbench {

struct Vec2 {
  mpq_class x;
  mpq_class y;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

mpq_class dot(const Vec2& a, const Vec2& b);
mpq_class norm2(const Vec2& a);

/// Output of Gauss-Lagrange reduction of the lattice spanned by (b1, b2).
/// g_i = h_i[0] b1 + h_i[1] b2 with (h1, h2) unimodular.
struct GaussReduction {
  Vec2 g1;
  Vec2 g2;
  std::array<mpz_class, 2> h1;
  std::array<mpz_class, 2> h2;
};

/// Exact reduction over Q: afterwards |g1| <= |g2| and |<g1, g2>| <= |g1|^2 / 2,
/// so g1 is a shortest nonzero vector and g2 a shortest independent one.
GaussReduction gauss_reduce(const Vec2& b1, const Vec2& b2);

}  // namespace ntbench
