#include "ntbench/lines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "ntbench/arith.hpp"
#include "ntbench/errors.hpp"

namespace ntbench::detmethod {

namespace {

using i128 = __int128;

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i128 ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

std::int64_t iabs(std::int64_t v) { return v < 0 ? -v : v; }

std::int64_t igcd(std::int64_t a, std::int64_t b) { return std::gcd(iabs(a), iabs(b)); }

// mu with base + mu * step inside the box, as a closed range [lo, hi].
std::optional<std::pair<i128, i128>> mu_range(const LineFamily& line, const Box& box) {
  const IntRange ranges[4] = {box.d, box.e, box.u, box.v};
  i128 lo = -(i128{1} << 100), hi = i128{1} << 100;
  for (int i = 0; i < 4; ++i) {
    if (ranges[i].empty()) return std::nullopt;
    const i128 rl = ranges[i].lo, rh = ranges[i].hi, b = line.base[i], s = line.step[i];
    if (s == 0) {
      if (b < rl || b > rh) return std::nullopt;
      continue;
    }
    i128 a1 = s > 0 ? ceil_div(rl - b, s) : ceil_div(rh - b, s);
    i128 a2 = s > 0 ? floor_div(rh - b, s) : floor_div(rl - b, s);
    lo = std::max(lo, a1);
    hi = std::min(hi, a2);
  }
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

mpq_class make_q(i128 v) { return mpq_class(mpz_class(static_cast<long>(v))); }

// Splits a rational direction into unit * primitive integer step with step_u > 0.
void set_step(LineFamily& line) {
  mpz_class den = 1;
  for (const auto& c : line.direction) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  std::array<mpz_class, 4> n;
  mpz_class g = 0;
  for (int i = 0; i < 4; ++i) {
    n[i] = line.direction[i].get_num() * (den / line.direction[i].get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n[i].get_mpz_t());
  }
  for (int i = 0; i < 4; ++i) {
    const mpz_class s = n[i] / g;
    if (!s.fits_slong_p()) throw BudgetExceeded("line step exceeds 64 bits");
    line.step[i] = s.get_si();
  }
  line.lambda_unit = mpq_class(g, den);
  line.lambda_unit.canonicalize();
}

// Moves the base to the point with u in [1, step_u].
void normalize_base(LineFamily& line) {
  const i128 su = line.step[2];
  const i128 shift = floor_div(line.base[2] - 1, su);
  for (int i = 0; i < 4; ++i) line.base[i] = static_cast<std::int64_t>(line.base[i] - shift * line.step[i]);
}

}  // namespace

mpz_class residual(const Quad& q) {
  const mpz_class d(static_cast<long>(q[0])), e(static_cast<long>(q[1])),
      u(static_cast<long>(q[2])), v(static_cast<long>(q[3]));
  return e * e * v - d * d * u - 1;
}

std::string LineFamily::lambda_pattern() const {
  // lambda ranges over (1 / lambda_unit) Z.
  const mpq_class spacing = 1 / lambda_unit;
  const mpz_class& p = spacing.get_num();
  const mpz_class& q = spacing.get_den();
  if (p == 1 && q == 1) return "Z";
  if (q == 1) return p.get_str() + "Z";
  if (p == 1) return "Z/" + q.get_str();
  return "(" + p.get_str() + "/" + q.get_str() + ")Z";
}

Quad LineFamily::point(std::int64_t mu) const {
  Quad p;
  for (int i = 0; i < 4; ++i) p[i] = base[i] + mu * step[i];
  return p;
}

bool LineFamily::contains(const Quad& q) const {
  std::optional<i128> mu;
  for (int i = 0; i < 4; ++i) {
    const i128 diff = i128{q[i]} - base[i];
    if (step[i] == 0) {
      if (diff != 0) return false;
      continue;
    }
    if (diff % step[i] != 0) return false;
    const i128 m = diff / step[i];
    if (mu && *mu != m) return false;
    mu = m;
  }
  return true;
}

bool LineFamily::contains(const SolutionQuad& q) const {
  return contains(Quad{static_cast<std::int64_t>(q.d), static_cast<std::int64_t>(q.e),
                       static_cast<std::int64_t>(q.u), static_cast<std::int64_t>(q.v)});
}

LineFamily kappa_minus1_line(std::int64_t d, std::int64_t e) {
  if (d < 1 || e < 1 || std::gcd(d, e) != 1)
    throw ParameterError("kappa_minus1_line: need coprime d, e >= 1");
  const i128 e2 = i128{e} * e, d2 = i128{d} * d;
  // Extended Euclid for d^2 mod e^2.
  i128 g = e2, x = 0, x1 = 1, a1 = d2 % e2;
  while (a1 != 0) {
    const i128 q = g / a1;
    std::swap(g, a1);
    a1 -= q * g;
    std::swap(x, x1);
    x1 -= q * x;
  }
  i128 u1 = e2 == 1 ? 0 : ((-x) % e2 + e2) % e2;
  if (u1 == 0) u1 = e2;
  const i128 v1 = (d2 * u1 + 1) / e2;
  LineFamily line;
  line.kappa = -1;
  line.base = {d, e, static_cast<std::int64_t>(u1), static_cast<std::int64_t>(v1)};
  line.step = {0, 0, static_cast<std::int64_t>(e2), static_cast<std::int64_t>(d2)};
  line.direction = {0, 0, make_q(e2), make_q(d2)};
  line.lambda_unit = 1;
  line.alpha = -d;
  line.beta = -e;
  if (residual(line.base) != 0) throw InvariantViolation("kappa_minus1_line: base off the surface");
  return line;
}

std::optional<LineFamily> make_kappa3_line(std::int64_t a, std::int64_t b, std::int64_t A,
                                           std::int64_t B, std::int64_t Q1, std::int64_t U1) {
  if (a < 1 || b < 1 || A == 0 || B == 0 || Q1 < 1) return std::nullopt;
  if (4 % (Q1 * Q1) != 0) return std::nullopt;  // Q1^2 | 4
  const std::int64_t vals[4] = {a, b, A, B};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (igcd(vals[i], vals[j]) != 1) return std::nullopt;
  if (igcd(Q1, A * B) != 1 || igcd(U1, Q1) != 1) return std::nullopt;

  const i128 A2 = i128{A} * A, B2 = i128{B} * B;
  const i128 q1c = 4 / (Q1 * Q1);  // Q1 * C
  const i128 d_num = i128{U1} * A2 * q1c + 3;
  if (d_num % (i128{b} * Q1) != 0) return std::nullopt;
  const i128 D1 = d_num / (i128{b} * Q1);
  const i128 e_num = 2 / Q1 - i128{b} * D1;
  if (e_num % a != 0) return std::nullopt;
  const i128 E1 = e_num / a;
  const i128 v_num = i128{Q1} * Q1 + i128{U1} * A2;
  if (v_num % B2 != 0) return std::nullopt;
  const i128 V1 = v_num / B2;

  LineFamily line;
  line.kappa = 3;
  line.a = a;
  line.b = b;
  line.A = A;
  line.B = B;
  line.Q1 = Q1;
  line.C = mpq_class(4, Q1 * Q1 * Q1);
  line.C.canonicalize();
  line.D1 = static_cast<std::int64_t>(D1);
  line.E1 = static_cast<std::int64_t>(E1);
  line.U1 = U1;
  line.V1 = static_cast<std::int64_t>(V1);
  line.base = {static_cast<std::int64_t>(A * D1), static_cast<std::int64_t>(B * E1),
               static_cast<std::int64_t>(i128{b} * b * U1), static_cast<std::int64_t>(i128{a} * a * V1)};
  line.direction = {make_q(i128{a} * A * A2 * B2) * line.C, -make_q(i128{b} * A2 * B * B2) * line.C,
                    make_q(i128{a} * b * b * b * B2), make_q(i128{a} * a * a * b * A2)};
  set_step(line);
  for (std::int64_t mu = 0; mu < 4; ++mu)  // cubic in mu: four zeros make it vanish identically
    if (residual(line.point(mu)) != 0) return std::nullopt;
  normalize_base(line);
  return line;
}

std::vector<SolutionQuad> points_in_box(const LineFamily& line, const Box& box) {
  std::vector<SolutionQuad> out;
  const auto range = mu_range(line, box);
  if (!range) return out;
  for (i128 mu = range->first; mu <= range->second; ++mu) {
    const Quad p = line.point(static_cast<std::int64_t>(mu));
    out.push_back({static_cast<std::uint64_t>(p[0]), static_cast<std::uint64_t>(p[1]),
                   static_cast<std::uint64_t>(p[2]), static_cast<std::uint64_t>(p[3])});
  }
  return out;
}

LineSearch enumerate_lines(const VarietyParams& params, const LineOptions& options) {
  params.eq.validate();
  if (params.eq.k != 2 || params.eq.l != 1 || params.eq.h != 1)
    throw ParameterError("enumerate_lines: only (k, l, h) = (2, 1, 1) is supported");
  LineSearch out;
  const Box box = params.box();
  if (box.d.empty() || box.e.empty() || box.u.empty() || box.v.empty()) return out;

  for (std::uint64_t d = box.d.lo; d <= box.d.hi; ++d) {
    for (std::uint64_t e = box.e.lo; e <= box.e.hi; ++e) {
      if (std::gcd(d, e) != 1) continue;
      LineFamily line = kappa_minus1_line(static_cast<std::int64_t>(d), static_cast<std::int64_t>(e));
      if (mu_range(line, box)) out.lines.push_back(std::move(line));
    }
  }

  // kappa = 3: |ab| <= c (UV)^(1/4) with UV = x^2 / (DE)^2, and each step
  // component no longer than twice the box's extent in that coordinate.
  const double de = mpq_class(params.D * params.E).get_d();
  const double uv = std::pow(static_cast<double>(params.x) / de, 2.0);
  const auto ab_max = static_cast<std::int64_t>(std::floor(options.ab_constant * std::pow(uv, 0.25)));
  const i128 d_lim = 2 * i128{box.d.hi}, e_lim = 2 * i128{box.e.hi};
  const i128 u_lim = 2 * i128{box.u.hi}, v_lim = 2 * i128{box.v.hi};

  std::set<std::pair<Quad, Quad>> seen;
  for (std::int64_t Q1 : {1, 2}) {
    const i128 c_num = 4, c_den = i128{Q1} * Q1 * Q1;
    for (std::int64_t a = 1; a <= ab_max; ++a) {
      for (std::int64_t b = 1; a * b <= ab_max; ++b) {
        if (std::gcd(a, b) != 1) continue;
        for (std::int64_t A = 1;; ++A) {
          const i128 A2 = i128{A} * A;
          if (a * A2 * A * c_num > d_lim * c_den || i128{a} * a * a * b * A2 > v_lim) break;
          for (std::int64_t B = 1;; ++B) {
            const i128 B2 = i128{B} * B;
            if (b * A2 * B2 * B * c_num > e_lim * c_den || i128{a} * b * b * b * B2 > u_lim) break;
            if (std::gcd(A, B) != 1 || std::gcd(a, A) != 1 || std::gcd(a, B) != 1 ||
                std::gcd(b, A) != 1 || std::gcd(b, B) != 1 || std::gcd(Q1, A * B) != 1)
              continue;
            // D1, E1, V1 integrality depends on U1 modulo a b Q1 B^2.
            const std::int64_t period = a * b * Q1 * B * B;
            for (std::int64_t sA : {1, -1}) {
              for (std::int64_t sB : {1, -1}) {
                ++out.kappa3_candidates;
                bool any = false;
                for (std::int64_t U1 = 1; U1 <= period; ++U1) {
                  auto line = make_kappa3_line(a, b, sA * A, sB * B, Q1, U1);
                  if (!line) continue;
                  any = true;
                  if (!mu_range(*line, box)) continue;
                  if (seen.insert({line->step, line->base}).second) out.lines.push_back(std::move(*line));
                }
                if (!any) ++out.kappa3_rejected;
              }
            }
          }
        }
      }
    }
  }
  return out;
}

bool kappa3_point_oracle(const SolutionQuad& q) {
  const mpz_class N = mpz_class(4) * q.u * mpz_class(q.d) * q.d;
  const mpz_class c = arith::integer_root(N, 3);
  // w^3 < w (w + 3)^2 <= N < (w + 3)^3 pins w to [c - 2, c].
  for (mpz_class w = c - 2; w <= c; ++w) {
    if (w < 1) continue;
    if (w * (w + 3) * (w + 3) == N) return true;
  }
  return false;
}

LineSplit count_split(const VarietyParams& params, const LineOptions& options,
                      std::uint64_t budget) {
  const auto solutions = brute_count(params, budget);
  const auto search = enumerate_lines(params, options);
  std::map<std::pair<std::int64_t, std::int64_t>, const LineFamily*> by_de;
  std::vector<const LineFamily*> kappa3;
  for (const auto& line : search.lines) {
    if (line.kappa == -1)
      by_de[{line.base[0], line.base[1]}] = &line;
    else
      kappa3.push_back(&line);
  }
  LineSplit split;
  split.total = solutions.size();
  for (const auto& q : solutions) {
    const auto it = by_de.find({static_cast<std::int64_t>(q.d), static_cast<std::int64_t>(q.e)});
    const bool on_m1 = it != by_de.end() && it->second->contains(q);
    const bool on_3 = std::any_of(kappa3.begin(), kappa3.end(),
                                  [&](const LineFamily* l) { return l->contains(q); });
    split.on_kappa_minus1 += on_m1;
    split.on_kappa3 += on_3;
    split.on_line += on_m1 || on_3;
  }
  split.off_line = split.total - split.on_line;
  return split;
}

}  // namespace ntbench::detmethod
