#include "ntbench/detmethod.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numeric>
#include <unordered_map>

#include <boost/multiprecision/mpfr.hpp>

#include "ntbench/arith.hpp"
#include "ntbench/errors.hpp"
#include "ntbench/exact_matrix.hpp"

namespace ntbench::detmethod {

namespace {

using Real = boost::multiprecision::mpfr_float_50;
using i128 = __int128;

mpz_class zpow(const mpz_class& b, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

mpq_class qpow(const mpq_class& q, unsigned long e) {
  mpq_class r(zpow(q.get_num(), e), zpow(q.get_den(), e));
  r.canonicalize();
  return r;
}

mpz_class floor_q(const mpq_class& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

mpz_class ceil_q(const mpq_class& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

std::uint64_t to_u64(const mpz_class& z) {
  if (z < 0) return 0;
  if (!mpz_fits_ulong_p(z.get_mpz_t())) throw BudgetExceeded("box bound exceeds 64 bits");
  return z.get_ui();
}

Real to_real(const mpq_class& q) {
  Real n, d;
  mpfr_set_z(n.backend().data(), q.get_num_mpz_t(), MPFR_RNDN);
  mpfr_set_z(d.backend().data(), q.get_den_mpz_t(), MPFR_RNDN);
  return n / d;
}

IntRange d_range(const mpq_class& D, BoxConvention conv) {
  if (conv == BoxConvention::DyadicOpen)
    return {to_u64(floor_q(D) + 1), to_u64(ceil_q(2 * D) - 1)};
  return {to_u64(floor_q(D / 2) + 1), to_u64(floor_q(D))};
}

// u with u^l * scale^k on the right side of x, scale^k = D^k.
IntRange u_range(std::uint64_t x, const mpq_class& scale, unsigned k, unsigned l,
                 BoxConvention conv) {
  const mpq_class X = mpq_class(mpz_class(x)) / qpow(scale, k);
  const mpz_class two_l = zpow(2, l);
  if (conv == BoxConvention::DyadicOpen) {
    const mpz_class lo = arith::integer_root(floor_q(X), l) + 1;
    const mpz_class top = ceil_q(X * two_l) - 1;
    const mpz_class hi = top < 0 ? mpz_class(0) : arith::integer_root(top, l);
    return {to_u64(lo), to_u64(hi)};
  }
  const mpz_class lo = arith::integer_root(floor_q(X / two_l), l) + 1;
  const mpz_class hi = arith::integer_root(floor_q(X), l);
  return {to_u64(lo), to_u64(hi)};
}

std::vector<std::uint64_t> powers(const IntRange& r, unsigned e) {
  std::vector<std::uint64_t> out;
  out.reserve(r.size());
  for (std::uint64_t n = r.lo; n <= r.hi && !r.empty(); ++n) {
    out.push_back(*arith::checked_pow(n, e));
    if (n == r.hi) break;
  }
  return out;
}

void check_value_bounds(const Equation& eq, const Box& box) {
  if (box.d.empty() || box.e.empty() || box.u.empty() || box.v.empty()) return;
  const mpz_class limit = mpz_class(1) << 62;
  const mpz_class lhs = zpow(box.e.hi, eq.k) * zpow(box.v.hi, eq.l);
  const mpz_class rhs = zpow(box.d.hi, eq.k) * zpow(box.u.hi, eq.l) + std::abs(eq.h);
  if (lhs >= limit || rhs >= limit) throw BudgetExceeded("equation values exceed 2^62");
}

bool box_empty(const Box& b) { return b.d.empty() || b.e.empty() || b.u.empty() || b.v.empty(); }

// v with e^k v^l = rhs inside the v-box, if any.
std::optional<std::uint64_t> solve_v(std::int64_t rhs, std::uint64_t ek, unsigned l,
                                     const IntRange& vr) {
  if (rhs <= 0) return std::nullopt;
  const auto r = static_cast<std::uint64_t>(rhs);
  if (r % ek != 0) return std::nullopt;
  const std::uint64_t w = r / ek;
  const std::uint64_t v = arith::integer_root(w, l);
  if (*arith::checked_pow(v, l) != w || !vr.contains(v)) return std::nullopt;
  return v;
}

void scan_d(const Equation& eq, const Box& box, std::uint64_t d_lo, std::uint64_t d_hi,
            const std::vector<std::uint64_t>& ek, const std::vector<std::uint64_t>& ul,
            std::vector<SolutionQuad>& out) {
  for (std::uint64_t d = d_lo; d <= d_hi; ++d) {
    const std::uint64_t dk = *arith::checked_pow(d, eq.k);
    for (std::uint64_t e = box.e.lo; e <= box.e.hi; ++e) {
      for (std::uint64_t u = box.u.lo; u <= box.u.hi; ++u) {
        const auto rhs = static_cast<std::int64_t>(dk * ul[u - box.u.lo]) + eq.h;
        if (auto v = solve_v(rhs, ek[e - box.e.lo], eq.l, box.v)) out.push_back({d, e, u, *v});
      }
    }
  }
}

i128 inverse_mod(i128 a, i128 m) {
  i128 g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
  while (a1 != 0) {
    const i128 q = g / a1;
    std::swap(g, a1);
    a1 -= q * g;
    std::swap(x, x1);
    x1 -= q * x;
  }
  return ((x % m) + m) % m;
}

}  // namespace

void Equation::validate() const {
  if (k < 2) throw ParameterError("equation: k must be >= 2");
  if (l < 1 || l >= k) throw ParameterError("equation: need 1 <= l < k");
  if (h == 0) throw ParameterError("equation: h must be nonzero");
}

Box VarietyParams::box() const {
  eq.validate();
  if (x == 0) throw ParameterError("variety: x must be positive");
  if (D <= 0 || E <= 0) throw ParameterError("variety: D and E must be positive");
  return {d_range(D, convention), d_range(E, convention), u_range(x, D, eq.k, eq.l, convention),
          u_range(x, E, eq.k, eq.l, convention)};
}

std::vector<SolutionQuad> brute_count(const Equation& eq, const Box& box, std::uint64_t budget,
                                      unsigned shards) {
  eq.validate();
  if (box_empty(box)) return {};
  const mpz_class cells = mpz_class(box.d.size()) * box.e.size() * box.u.size();
  if (cells > budget) throw BudgetExceeded("brute_count: box has more cells than the budget");
  check_value_bounds(eq, box);
  const auto ek = powers(box.e, eq.k);
  const auto ul = powers(box.u, eq.l);

  shards = static_cast<unsigned>(std::clamp<std::uint64_t>(shards, 1, box.d.size()));
  if (shards == 1) {
    std::vector<SolutionQuad> out;
    scan_d(eq, box, box.d.lo, box.d.hi, ek, ul, out);
    return out;
  }
  std::vector<std::future<std::vector<SolutionQuad>>> parts;
  const std::uint64_t step = box.d.size() / shards;
  std::uint64_t lo = box.d.lo;
  for (unsigned s = 0; s < shards; ++s) {
    const std::uint64_t hi = s + 1 == shards ? box.d.hi : lo + step - 1;
    parts.push_back(std::async(std::launch::async, [&, lo, hi] {
      std::vector<SolutionQuad> part;
      scan_d(eq, box, lo, hi, ek, ul, part);
      return part;
    }));
    lo = hi + 1;
  }
  std::vector<SolutionQuad> out;
  for (auto& p : parts) {
    auto part = p.get();
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<SolutionQuad> brute_count(const VarietyParams& params, std::uint64_t budget,
                                      unsigned shards) {
  return brute_count(params.eq, params.box(), budget, shards);
}

std::uint64_t congruence_count(const Equation& eq, const Box& box, std::uint64_t budget) {
  eq.validate();
  if (box_empty(box)) return 0;
  const mpz_class work = mpz_class(box.e.size()) * (box.d.size() + box.u.size());
  if (work > budget) throw BudgetExceeded("congruence_count: work exceeds the budget");
  check_value_bounds(eq, box);
  const auto ul = powers(box.u, eq.l);

  std::uint64_t count = 0;
  auto check = [&](std::uint64_t d, std::uint64_t u, std::uint64_t ek) {
    const auto rhs = static_cast<std::int64_t>(*arith::checked_pow(d, eq.k) * ul[u - box.u.lo]) + eq.h;
    if (solve_v(rhs, ek, eq.l, box.v)) ++count;
  };

  for (std::uint64_t e = box.e.lo; e <= box.e.hi; ++e) {
    const std::uint64_t ek = *arith::checked_pow(e, eq.k);
    // d^k mod e^k -> the d in the box with that residue.
    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> by_residue;
    for (std::uint64_t d = box.d.lo; d <= box.d.hi; ++d)
      by_residue[arith::powmod(d % ek, eq.k, ek)].push_back(d);
    const i128 h_mod = ((i128{eq.h} % ek) + ek) % ek;
    for (std::uint64_t u = box.u.lo; u <= box.u.hi; ++u) {
      if (std::gcd(u, e) != 1) {
        for (std::uint64_t d = box.d.lo; d <= box.d.hi; ++d) check(d, u, ek);
        continue;
      }
      // d^k u^l == -h (mod e^k)  =>  d^k == -h u^(-l).
      const i128 inv = ek == 1 ? 0 : inverse_mod(ul[u - box.u.lo] % ek, ek);
      const auto target = static_cast<std::uint64_t>(((ek - h_mod) % ek) * inv % ek);
      const auto it = by_residue.find(target);
      if (it == by_residue.end()) continue;
      for (std::uint64_t d : it->second) check(d, u, ek);
    }
  }
  return count;
}

std::uint64_t congruence_count(const VarietyParams& params, std::uint64_t budget) {
  return congruence_count(params.eq, params.box(), budget);
}

std::uint64_t choose_M(const VarietyParams& params) {
  params.eq.validate();
  if (params.x <= 1) throw ParameterError("choose_M: x must exceed 1");
  const mpq_class DE = params.D * params.E;
  if (DE <= 1) throw ParameterError("choose_M: DE must exceed 1");
  const Real log_x = boost::multiprecision::log(Real(params.x));
  const Real log_de = boost::multiprecision::log(to_real(DE));
  const Real log_uv = (2 * log_x - params.eq.k * log_de) / params.eq.l;
  if (log_uv <= 0) throw ParameterError("choose_M: UV must exceed 1");
  const Real m = boost::multiprecision::ceil(
      boost::multiprecision::exp(Real(9) / 8 * log_de * log_uv / log_x));
  return static_cast<std::uint64_t>(m);
}

std::optional<std::size_t> SubdivisionPlan::index_of(const mpq_class& s) const {
  if (intervals.empty()) return std::nullopt;
  const mpz_class x3 = ceil_q(s / delta) - 1;
  const mpz_class idx = x3 - intervals.front().x3;
  if (idx < 0 || idx >= intervals.size()) return std::nullopt;
  return idx.get_ui();
}

SubdivisionPlan subdivide(const VarietyParams& params, std::uint64_t M) {
  if (M == 0) throw ParameterError("subdivide: M must be >= 1");
  const Box box = params.box();
  SubdivisionPlan plan{M, params.D / params.E / M, {}};
  plan.delta.canonicalize();
  if (box.d.empty() || box.e.empty()) return plan;
  const mpq_class s_min(box.d.lo, box.e.hi), s_max(box.d.hi, box.e.lo);
  const mpz_class first = ceil_q(s_min / plan.delta) - 1;
  const mpz_class last = ceil_q(s_max / plan.delta) - 1;
  if (last - first >= 10'000'000) throw BudgetExceeded("subdivide: more than 10^7 intervals");
  for (mpz_class x3 = first; x3 <= last; ++x3) {
    Interval iv{x3.get_si(), plan.delta * x3, plan.delta * (x3 + 1)};
    iv.s0.canonicalize();
    iv.s1.canonicalize();
    plan.intervals.push_back(std::move(iv));
  }
  return plan;
}

IntervalCertificate certify_interval(const std::vector<SolutionQuad>& solutions, unsigned A,
                                     unsigned B, const mpq_class& s0, std::uint64_t M) {
  if (solutions.empty()) throw ParameterError("certify_interval: no solutions");
  IntervalCertificate cert{s0, M, A, B, solutions.size(), std::size_t{A + 1} * (B + 1), 0, {}, {}};

  // Row j scaled by e^A u^B: entry (a, b) is d^a e^(A-a) v^b u^(B-b).
  IntMatrix m;
  m.reserve(solutions.size());
  for (const auto& q : solutions) {
    std::vector<mpz_class> row;
    row.reserve(cert.H);
    for (unsigned a = 0; a <= A; ++a)
      for (unsigned b = 0; b <= B; ++b)
        row.push_back(zpow(q.d, a) * zpow(q.e, A - a) * zpow(q.v, b) * zpow(q.u, B - b));
    m.push_back(std::move(row));
  }

  const EchelonForm ef = bareiss_echelon(m);
  cert.rank = ef.rank;
  if (ef.rank == cert.H) {
    cert.witness_rows = ef.pivot_rows;
    return cert;
  }
  cert.coeffs = *integer_null_vector(m);
  for (const auto& row : m) {
    mpz_class acc = 0;
    for (std::size_t j = 0; j < cert.H; ++j) acc += row[j] * cert.coeffs[j];
    if (acc != 0) throw InvariantViolation("certify_interval: C_I does not vanish on a solution");
  }
  for (const auto& c : cert.coeffs)
    cert.coeff_bits = std::max(cert.coeff_bits, mpz_sizeinbase(c.get_mpz_t(), 2));
  return cert;
}

mpq_class evaluate_certificate(const IntervalCertificate& cert, const mpq_class& s,
                               const mpq_class& t) {
  mpq_class acc = 0;
  for (unsigned a = 0; a <= cert.A; ++a)
    for (unsigned b = 0; b <= cert.B; ++b)
      acc += mpq_class(cert.coeffs[a * (cert.B + 1) + b]) * qpow(s, a) * qpow(t, b);
  return acc;
}

std::vector<IntervalCertificate> certify_plan(const SubdivisionPlan& plan,
                                              const std::vector<SolutionQuad>& solutions,
                                              unsigned A, unsigned B) {
  std::map<std::size_t, std::vector<SolutionQuad>> groups;
  for (const auto& q : solutions) {
    const auto idx = plan.index_of(q.s());
    if (!idx) throw InvariantViolation("certify_plan: solution outside the subdivision");
    groups[*idx].push_back(q);
  }
  std::vector<IntervalCertificate> out;
  out.reserve(groups.size());
  for (const auto& [idx, group] : groups)
    out.push_back(certify_interval(group, A, B, plan.intervals[idx].s0, plan.M));
  return out;
}

bool ReducedLattice::hermite_holds() const {
  return norm2(g1) * norm2(g2) <= mpq_class(4, 3) * det * det;
}

bool ReducedLattice::unimodular() const {
  const mpz_class dt = h1[0] * h2[1] - h1[1] * h2[0];
  return dt == 1 || dt == -1;
}

ReducedLattice lattice_for_interval(const mpq_class& D, const mpq_class& E, std::uint64_t M,
                                    const mpq_class& s0) {
  if (D <= 0 || E <= 0 || M == 0) throw ParameterError("lattice: D, E, M must be positive");
  const mpq_class scale = mpq_class(mpz_class(M)) / D;
  Vec2 b1{scale, 0};
  Vec2 b2{-scale * s0, 1 / E};
  b1.x.canonicalize();
  b2.x.canonicalize();
  b2.y.canonicalize();
  const GaussReduction r = gauss_reduce(b1, b2);
  ReducedLattice lat{r.g1, r.g2, scale / E, 0, 0, r.h1, r.h2};
  lat.det.canonicalize();
  lat.L1 = 2.0 / std::sqrt(norm2(r.g1).get_d());
  lat.L2 = 2.0 / std::sqrt(norm2(r.g2).get_d());
  return lat;
}

std::uint64_t vu_index(std::uint64_t x3, std::uint64_t M, unsigned k, unsigned l) {
  if (M == 0 || l == 0 || l >= k) throw ParameterError("vu_index: need M >= 1 and 1 <= l < k");
  const mpz_class y = zpow(x3, k) / zpow(M, k - l);
  return to_u64(arith::integer_root(y, l));
}

double ts_deviation_ratio(const VarietyParams& params, const std::vector<SolutionQuad>& solutions) {
  const Real kl = Real(params.eq.k) / params.eq.l;
  const Real scale = boost::multiprecision::pow(to_real(params.D / params.E), kl) / params.x;
  Real worst = 0;
  for (const auto& q : solutions) {
    const Real dev = boost::multiprecision::abs(
        to_real(q.t()) - boost::multiprecision::pow(to_real(q.s()), kl));
    worst = std::max(worst, Real(dev / scale));
  }
  return static_cast<double>(worst);
}

}  // namespace ntbench::detmethod
