#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ntbench/detmethod.hpp"

namespace ntbench::detmethod {

using Quad = std::array<std::int64_t, 4>;  // (d, e, u, v)

/// A line of integer points on e^2 v - d^2 u = 1 (k = 2, l = 1, h = 1).
/// The integer points are exactly base + mu * step, mu in Z; `direction` is
/// the unnormalized direction from the family's parametrization and
/// direction = lambda_unit * step, so lambda runs over (1/lambda_unit) Z.
struct LineFamily {
  int kappa;  // -1 or 3
  Quad base;
  Quad step;
  std::array<mpq_class, 4> direction;
  mpq_class lambda_unit;

  // kappa = -1: (alpha, beta) = (d, e) up to sign.
  std::int64_t alpha = 0, beta = 0;
  // kappa = 3 parameters; C = 4 / Q1^3.
  std::int64_t a = 0, b = 0, A = 0, B = 0, Q1 = 0;
  mpq_class C = 0;
  std::int64_t D1 = 0, E1 = 0, U1 = 0, V1 = 0;

  /// "Z", "Z/2", "2Z", ... : the lambda values that give integer points.
  std::string lambda_pattern() const;
  bool contains(const Quad& q) const;
  bool contains(const SolutionQuad& q) const;
  Quad point(std::int64_t mu) const;
};

/// e^2 v - d^2 u - 1 at q, exactly.
mpz_class residual(const Quad& q);

/// Line through the solutions with this (d, e): u == -d^(-2) (mod e^2),
/// base u in [1, e^2], step (0, 0, e^2, d^2). Throws ParameterError unless
/// d, e >= 1 are coprime.
LineFamily kappa_minus1_line(std::int64_t d, std::int64_t e);

/// Line (A D1, B E1, b^2 U1, a^2 V1) + lambda (a A^3 B^2 C, -b A^2 B^3 C, a b^3 B^2, a^3 b A^2)
/// with D1, E1, V1 solved from U1 via
///   Q1^2 = V1 B^2 - U1 A^2,  b D1 + a E1 = 2/Q1,  U1 A^2 Q1 C - D1 b Q1 = -3.
/// nullopt when Q1^2 does not divide 4, coprimality fails, a solved value is
/// not an integer, or the line does not lie on the surface.
std::optional<LineFamily> make_kappa3_line(std::int64_t a, std::int64_t b, std::int64_t A,
                                           std::int64_t B, std::int64_t Q1, std::int64_t U1);

/// Integer points of the line inside the box (all coordinates positive).
std::vector<SolutionQuad> points_in_box(const LineFamily& line, const Box& box);

struct LineOptions {
  /// Constant c in |ab| <= c (UV)^(1/4); 4 is the stress setting.
  double ab_constant = 1.0;
};

struct LineSearch {
  std::vector<LineFamily> lines;
  std::size_t kappa3_candidates = 0;  // admissible parameter tuples tried
  std::size_t kappa3_rejected = 0;    // tuples whose line failed verification
};

/// All kappa = -1 lines through the box and the kappa = 3 lines found within
/// the parameter bounds that meet the box. Requires (k, l, h) = (2, 1, 1).
LineSearch enumerate_lines(const VarietyParams& params, const LineOptions& options = {});

/// Point on some kappa = 3 line, tested without the line parametrization:
/// such points have an integer w >= 1 with w (w + 3)^2 = 4 u d^2.
bool kappa3_point_oracle(const SolutionQuad& q);

struct LineSplit {
  std::uint64_t total = 0;
  std::uint64_t on_line = 0;
  std::uint64_t off_line = 0;
  std::uint64_t on_kappa_minus1 = 0;
  std::uint64_t on_kappa3 = 0;
};

/// Partition of brute_count(params) by membership in the enumerated lines.
LineSplit count_split(const VarietyParams& params, const LineOptions& options = {},
                      std::uint64_t budget = kBruteBudget);

}  // namespace ntbench::detmethod
