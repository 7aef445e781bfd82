#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace ntbench {

/// a + b sqrt(n) with rational a, b. Sums and products of two surds need the
/// same radicand unless one of them is rational (b = 0).
class Surd {
 public:
  Surd(mpq_class a = 0, mpq_class b = 0, std::uint64_t n = 0);
  static Surd rational(const mpq_class& q) { return Surd(q); }

  const mpq_class& a() const { return a_; }
  const mpq_class& b() const { return b_; }
  std::uint64_t n() const { return n_; }
  bool is_rational() const { return b_ == 0; }

  /// Exact sign, by comparing a^2 with b^2 n when a and b disagree in sign.
  int sign() const;

  Surd operator-() const;
  friend Surd operator+(const Surd& x, const Surd& y);
  friend Surd operator-(const Surd& x, const Surd& y);
  friend Surd operator*(const Surd& x, const Surd& y);
  friend Surd operator/(const Surd& x, const mpq_class& q);

  friend bool operator==(const Surd& x, const Surd& y) { return (x - y).sign() == 0; }
  friend bool operator<(const Surd& x, const Surd& y) { return (x - y).sign() < 0; }
  friend bool operator<=(const Surd& x, const Surd& y) { return (x - y).sign() <= 0; }
  friend bool operator>(const Surd& x, const Surd& y) { return y < x; }
  friend bool operator>=(const Surd& x, const Surd& y) { return y <= x; }

  /// floor(value), exact.
  mpz_class floor() const;
  /// Decimal truncated to `digits` places, e.g. "0.577884593168".
  std::string decimal(unsigned digits) const;
  /// "p/q" or "(p+q*sqrt(n))/r" over a common denominator.
  std::string exact() const;
  double to_double() const;

 private:
  mpq_class a_, b_;
  std::uint64_t n_;
};

}  // namespace ntbench
