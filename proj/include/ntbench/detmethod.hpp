#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ntbench/lattice.hpp"

namespace ntbench::detmethod {

/// Inclusive integer range; empty when lo > hi.
struct IntRange {
  std::uint64_t lo;
  std::uint64_t hi;

  bool empty() const { return lo > hi; }
  std::uint64_t size() const { return empty() ? 0 : hi - lo + 1; }
  bool contains(std::uint64_t n) const { return lo <= n && n <= hi; }
};

struct Box {
  IntRange d, e, u, v;
};

/// d ~ D: DyadicOpen is D < d < 2D, HalfClosed is D/2 < d <= D.
/// u and v follow from U = x^(1/l) / D^(k/l), V = x^(1/l) / E^(k/l) the same way.
enum class BoxConvention { DyadicOpen, HalfClosed };

/// e^k v^l - d^k u^l = h.
struct Equation {
  unsigned k;
  unsigned l;
  std::int64_t h;

  /// Throws ParameterError unless 1 <= l < k and h != 0.
  void validate() const;
};

struct VarietyParams {
  Equation eq;
  std::uint64_t x;
  mpq_class D;
  mpq_class E;
  BoxConvention convention = BoxConvention::DyadicOpen;

  /// Exact integer box; membership decided on integers (u^l D^k against x).
  Box box() const;
};

inline mpq_class reduced(std::uint64_t num, std::uint64_t den) {
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

struct SolutionQuad {
  std::uint64_t d, e, u, v;

  mpq_class s() const { return reduced(d, e); }
  mpq_class t() const { return reduced(v, u); }
  friend bool operator==(const SolutionQuad&, const SolutionQuad&) = default;
  friend auto operator<=>(const SolutionQuad&, const SolutionQuad&) = default;
};

inline constexpr std::uint64_t kBruteBudget = 1'000'000'000;

/// Every (d, e, u, v) in the box solving the equation, ordered by (d, e, u).
/// Solves for v with an integer root. Throws BudgetExceeded when
/// |d| |e| |u| > budget or values could leave 62 bits.
std::vector<SolutionQuad> brute_count(const Equation& eq, const Box& box,
                                      std::uint64_t budget = kBruteBudget, unsigned shards = 1);
std::vector<SolutionQuad> brute_count(const VarietyParams& params,
                                      std::uint64_t budget = kBruteBudget, unsigned shards = 1);

/// Same count via d^k == -h u^(-l) (mod e^k) for gcd(u, e) = 1, grouping the
/// d-box by d^k mod e^k; pairs with gcd(u, e) > 1 are scanned directly.
std::uint64_t congruence_count(const Equation& eq, const Box& box,
                               std::uint64_t budget = kBruteBudget);
std::uint64_t congruence_count(const VarietyParams& params, std::uint64_t budget = kBruteBudget);

/// M = ceil(exp((9/8) log(DE) log(UV) / log x)) with UV = x^(2/l) / (DE)^(k/l).
/// Throws ParameterError unless DE > 1, UV > 1 and x > 1.
std::uint64_t choose_M(const VarietyParams& params);

/// One cell (s0, s1] of the s-grid, s0 = x3 (D/E) / M.
struct Interval {
  std::int64_t x3;
  mpq_class s0;
  mpq_class s1;
};

/// Additive grid of step delta = (D/E)/M covering the box's s-range
/// [d_lo / e_hi, d_hi / e_lo]. Cells are half-open so each s lies in one.
struct SubdivisionPlan {
  std::uint64_t M;
  mpq_class delta;
  std::vector<Interval> intervals;

  /// Position of the cell holding s, or nullopt outside the covered range.
  std::optional<std::size_t> index_of(const mpq_class& s) const;
};

SubdivisionPlan subdivide(const VarietyParams& params, std::uint64_t M);

/// Auxiliary-polynomial certificate for one interval: rank of the J x H matrix of
/// monomials s^a t^b (a <= A, b <= B, a-major order) and, when rank < H, an
/// integer C_I with content 1 vanishing at every solution in the interval.
struct IntervalCertificate {
  mpq_class s0;
  std::uint64_t M;
  unsigned A, B;
  std::size_t J, H, rank;
  std::vector<mpz_class> coeffs;        // empty when rank == H
  std::vector<std::size_t> witness_rows;  // rows of a nonsingular H x H minor when rank == H
  std::size_t coeff_bits = 0;            // largest coefficient bit length

  bool has_polynomial() const { return !coeffs.empty(); }
};

/// Throws ParameterError for an empty solution list. The vanishing of C_I is
/// re-checked exactly; a failure raises InvariantViolation.
IntervalCertificate certify_interval(const std::vector<SolutionQuad>& solutions, unsigned A,
                                     unsigned B, const mpq_class& s0 = 0, std::uint64_t M = 0);

/// C_I(s, t) = sum coeffs[a (B+1) + b] s^a t^b.
mpq_class evaluate_certificate(const IntervalCertificate& cert, const mpq_class& s,
                               const mpq_class& t);

/// Groups solutions by interval and certifies every nonempty interval.
std::vector<IntervalCertificate> certify_plan(const SubdivisionPlan& plan,
                                              const std::vector<SolutionQuad>& solutions,
                                              unsigned A = 1, unsigned B = 1);

/// Reduced basis of {T(x1, x2)}, T(x1, x2) = ((M/D)(x1 - x2 s0), x2/E),
/// det = M/(DE). L_i = 2/|g_i|, so L1 L2 >= 2 sqrt(3) DE/M by the Hermite bound.
struct ReducedLattice {
  Vec2 g1, g2;
  mpq_class det;
  double L1, L2;
  std::array<mpz_class, 2> h1, h2;

  /// |g1|^2 |g2|^2 <= (4/3) det^2, decided exactly.
  bool hermite_holds() const;
  bool unimodular() const;
};

inline constexpr double kLatticeConstant = 3.4641016151377544;  // 2 sqrt(3)

ReducedLattice lattice_for_interval(const mpq_class& D, const mpq_class& E, std::uint64_t M,
                                    const mpq_class& s0);

/// Index x4 of the matching cell on the (v, u) side, t0 = x4 (V/U) / M:
/// floor((x3^k / M^(k-l))^(1/l)), since t is close to s^(k/l).
std::uint64_t vu_index(std::uint64_t x3, std::uint64_t M, unsigned k, unsigned l);

/// Largest |t - s^(k/l)| / ((1/x)(V/U)) over the given solutions.
double ts_deviation_ratio(const VarietyParams& params, const std::vector<SolutionQuad>& solutions);

}  // namespace ntbench::detmethod
