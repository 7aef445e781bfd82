#include "ntbench/surd.hpp"

#include <cmath>

#include "ntbench/errors.hpp"

namespace ntbench {

namespace {

int sgn(const mpq_class& q) { return sgn(q.get_num()); }

std::uint64_t common_radicand(const Surd& x, const Surd& y) {
  if (x.is_rational()) return y.n();
  if (y.is_rational()) return x.n();
  if (x.n() != y.n()) throw ParameterError("surd: radicands differ");
  return x.n();
}

}  // namespace

Surd::Surd(mpq_class a, mpq_class b, std::uint64_t n) : a_(std::move(a)), b_(std::move(b)), n_(n) {
  a_.canonicalize();
  b_.canonicalize();
  if (n_ == 0) b_ = 0;
}

int Surd::sign() const {
  const int sa = sgn(a_), sb = n_ == 0 ? 0 : sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Opposite signs: the larger of a^2 and b^2 n wins.
  const mpq_class lhs = a_ * a_, rhs = b_ * b_ * n_;
  if (lhs == rhs) return 0;
  return lhs > rhs ? sa : sb;
}

Surd Surd::operator-() const { return Surd(-a_, -b_, n_); }

Surd operator+(const Surd& x, const Surd& y) {
  return Surd(x.a_ + y.a_, x.b_ + y.b_, common_radicand(x, y));
}

Surd operator-(const Surd& x, const Surd& y) { return x + (-y); }

Surd operator*(const Surd& x, const Surd& y) {
  const std::uint64_t n = common_radicand(x, y);
  return Surd(x.a_ * y.a_ + x.b_ * y.b_ * n, x.a_ * y.b_ + x.b_ * y.a_, n);
}

Surd operator/(const Surd& x, const mpq_class& q) {
  if (q == 0) throw ParameterError("surd: division by zero");
  return Surd(x.a_ / q, x.b_ / q, x.n_);
}

mpz_class Surd::floor() const {
  // Estimate in floating point, then correct with exact sign tests.
  mpz_class m;
  const double est = to_double();
  if (!std::isfinite(est)) throw ParameterError("surd: value out of double range");
  mpz_set_d(m.get_mpz_t(), std::floor(est));
  while ((*this - Surd(mpq_class(m))).sign() < 0) --m;
  while ((*this - Surd(mpq_class(m + 1))).sign() >= 0) ++m;
  return m;
}

std::string Surd::decimal(unsigned digits) const {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  const bool negative = sign() < 0;
  const Surd mag = negative ? -*this : *this;
  const mpz_class scaled = (mag * Surd(mpq_class(scale))).floor();
  std::string s = scaled.get_str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  std::string out = s.substr(0, s.size() - digits);
  if (digits > 0) out += "." + s.substr(s.size() - digits);
  return negative ? "-" + out : out;
}

std::string Surd::exact() const {
  if (is_rational()) {
    return a_.get_den() == 1 ? a_.get_num().get_str() : a_.get_num().get_str() + "/" + a_.get_den().get_str();
  }
  mpz_class r;
  mpz_lcm(r.get_mpz_t(), a_.get_den_mpz_t(), b_.get_den_mpz_t());
  const mpz_class p = a_.get_num() * (r / a_.get_den());
  const mpz_class q = b_.get_num() * (r / b_.get_den());
  std::string root = "sqrt(" + std::to_string(n_) + ")";
  std::string body;
  if (p != 0) body = p.get_str();
  if (q < 0)
    body += "-";
  else if (p != 0)
    body += "+";
  const mpz_class qa = abs(q);
  body += (qa == 1 ? "" : qa.get_str() + "*") + root;
  if (r == 1) return body;
  return "(" + body + ")/" + r.get_str();
}

double Surd::to_double() const {
  return a_.get_d() + b_.get_d() * std::sqrt(static_cast<double>(n_));
}

}  // namespace ntbench
