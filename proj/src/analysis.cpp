#include "ntbench/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "ntbench/errors.hpp"

namespace ntbench::analysis {

namespace {

mpq_class q(long num, long den = 1) {
  mpq_class r(num, den);
  r.canonicalize();
  return r;
}

void require_k(unsigned k) {
  if (k < 2) throw ParameterError("k must be >= 2");
}

}  // namespace

const ExponentEntry& ExponentReport::at(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw ParameterError("exponent report has no entry " + name);
}

Surd omega(unsigned k) {
  require_k(k);
  if (k == 2) return Surd(q(26, 81), q(1, 81), 433);
  return Surd(q(169, 144 * static_cast<long>(k)));
}

ExponentReport exponent_table(unsigned k) {
  require_k(k);
  const long kl = k;
  ExponentReport r;
  r.label = "k=" + std::to_string(k);
  r.note = "epsilon terms omitted";
  auto add = [&](std::string name, Surd v) {
    std::string dec = v.decimal(12);
    r.entries.push_back({std::move(name), std::move(v), std::move(dec)});
  };
  add("omega", omega(k));
  add("prior_pair", Surd(q(14, 7 * kl + 8)));
  add("prior_large_k", Surd(q(14, 9 * kl)));
  add("trivial", Surd(q(2, kl + 1)));
  add("tuple", Surd(q(3, 2 * kl + 1)));

  const Surd& w = r.entries[0].value;
  const Surd& prior_pair = r.entries[1].value;
  const Surd& large_k = r.entries[2].value;
  const bool w_le_prior = w <= prior_pair;
  const bool w_lt_large_k = w < large_k;
  r.comparisons = {
      {"omega <= prior_pair", w_le_prior},
      {"omega < prior_large_k", w_lt_large_k},
      {"omega <= tuple", w <= r.entries[4].value},
      {"omega < trivial", w < r.entries[3].value},
      {"prior_large_k < prior_pair (holds iff k > 4)", large_k < prior_pair},
  };
  if (k == 2) r.comparisons.push_back({"omega < 7/12 < 7/11", w < Surd(q(7, 12)) && q(7, 12) < q(7, 11)});
  if (!w_le_prior || !w_lt_large_k)
    throw InvariantViolation("exponent_table: omega comparison failed for " + r.label);
  return r;
}

mpq_class f_psi(unsigned k, const mpq_class& psi) {
  require_k(k);
  if (psi < 0 || psi > q(2, k)) throw ParameterError("f_psi: psi outside [0, 2/k]");
  const mpq_class rest = 2 - k * psi;
  mpq_class v = std::min(psi, rest) / 2 + q(9, 16) * psi * rest;
  v.canonicalize();
  return v;
}

mpq_class f_psi_argmax(unsigned k) {
  require_k(k);
  return k == 2 ? q(2, 3) : q(13, 9 * static_cast<long>(k));
}

mpq_class pell_bound(const mpq_class& alpha) {
  if (alpha < q(1, 2)) throw ParameterError("pell_bound: alpha must be >= 1/2");
  const mpq_class first = q(9, 16) * alpha / (alpha + q(1, 2)) + std::min(mpq_class(1), alpha) / 2;
  const mpq_class second = q(1, 2) + alpha / 5;
  mpq_class v = std::max(first, second);
  v.canonicalize();
  return v;
}

mpq_class squarefull_f(const mpq_class& psi) {
  if (psi < 0 || psi > q(2, 3)) throw ParameterError("squarefull_f: psi outside [0, 2/3]");
  const mpq_class rest = 1 - q(3, 2) * psi;
  mpq_class v = std::min(psi, rest) / 2 + std::max(mpq_class(q(9, 8) * psi * rest), q(9, 50)) / 2;
  v.canonicalize();
  return v;
}

CriticalPsi critical_psi() {
  CriticalPsi c;
  c.psi = Surd(q(55, 54), q(-1, 54), 433);
  c.linear_branch = Surd(mpq_class(1)) - c.psi * Surd(q(2, 3));
  c.quadratic_branch =
      Surd(q(9, 8)) * c.psi * (Surd(mpq_class(1)) - c.psi) + c.psi * Surd(q(1, 2));
  c.matches_omega = c.linear_branch == omega(2) && c.quadratic_branch == omega(2);
  return c;
}

FitResult fit_exponent(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 2) throw ParameterError("fit_exponent: need at least two samples");
  const double n = static_cast<double>(samples.size());
  double sx = 0, sy = 0;
  std::vector<std::pair<double, double>> logs;
  for (const auto& [x, y] : samples) {
    if (!(x > 0) || !(y > 0)) throw ParameterError("fit_exponent: samples must be positive");
    logs.emplace_back(std::log(x), std::log(y));
    sx += logs.back().first;
    sy += logs.back().second;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [lx, ly] : logs) {
    sxx += (lx - mx) * (lx - mx);
    sxy += (lx - mx) * (ly - my);
  }
  if (sxx == 0) throw ParameterError("fit_exponent: all x values are equal");
  FitResult f{sxy / sxx, 0, 0, samples.size()};
  f.intercept = my - f.slope * mx;
  for (const auto& [lx, ly] : logs) {
    const double e = ly - (f.intercept + f.slope * lx);
    f.residual += e * e;
  }
  return f;
}

mpq_class parse_rational(const std::string& text) {
  auto bad = [&] { return ParameterError("not a rational number: '" + text + "'"); };
  if (text.empty()) throw bad();
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    mpq_class r;
    try {
      r = mpq_class(mpz_class(text.substr(0, slash), 10), mpz_class(text.substr(slash + 1), 10));
    } catch (const std::invalid_argument&) {
      throw bad();
    }
    if (r.get_den() == 0) throw bad();
    r.canonicalize();
    return r;
  }
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  std::string digits;
  std::size_t frac = 0;
  bool seen_dot = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      if (seen_dot) ++frac;
    } else if (c == 'e' || c == 'E') {
      break;
    } else {
      throw bad();
    }
  }
  if (digits.empty()) throw bad();
  long exponent = 0;
  if (i < text.size()) {
    try {
      std::size_t used = 0;
      exponent = std::stol(text.substr(i + 1), &used);
      if (used != text.size() - i - 1) throw bad();
    } catch (const std::logic_error&) {
      throw bad();
    }
  }
  if (std::labs(exponent) > 10000) throw bad();
  mpq_class r{mpz_class(digits, 10)};
  mpz_class p10;
  const long shift = exponent - static_cast<long>(frac);
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
  if (shift >= 0)
    r *= p10;
  else
    r /= p10;
  r.canonicalize();
  return negative ? mpq_class(-r) : r;
}

}  // namespace ntbench::analysis
