// Acceptance gate: one [PASS]/[FAIL] line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "ntbench/analysis.hpp"
#include "ntbench/arith.hpp"
#include "ntbench/cli.hpp"
#include "ntbench/detmethod.hpp"
#include "ntbench/errors.hpp"
#include "ntbench/kfree.hpp"
#include "ntbench/lines.hpp"
#include "ntbench/pell.hpp"
#include "ntbench/squarefull.hpp"
#include "oracles.hpp"

using namespace ntbench;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = "failed: " + what;
    pass = pass && ok;
  }
  void note(const std::string& s) {
    if (pass) detail += (detail.empty() ? "" : "; ") + s;
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double time_limit, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit > 0 && secs >= time_limit) {
    o.pass = false;
    o.detail += "; over the " + std::to_string(static_cast<int>(time_limit)) + " s limit";
  }
  if (!o.pass) ++failures;
  char t[32];
  std::snprintf(t, sizeof t, "%.2f s", secs);
  std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << "AC" << id << ' ' << title << " (" << t << "): " << o.detail
            << std::endl;
}

std::string fmt(double v, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

// Smallest prime factor table; independent of the library's factorization.
std::vector<std::uint32_t> spf_table(std::uint32_t n) {
  std::vector<std::uint32_t> spf(n + 1, 0);
  for (std::uint32_t i = 2; i <= n; ++i)
    if (spf[i] == 0)
      for (std::uint64_t j = i; j <= n; j += i)
        if (spf[j] == 0) spf[j] = i;
  return spf;
}

bool squarefull_by_spf(std::uint32_t n, const std::vector<std::uint32_t>& spf) {
  while (n > 1) {
    const std::uint32_t p = spf[n];
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e < 2) return false;
  }
  return true;
}

void ac1(Outcome& o) {
  constexpr std::uint64_t X = 100000;
  for (unsigned k : {2u, 3u, 4u}) {
    // naive per-n flags on [0, X + 3]
    std::vector<bool> naive(X + 4);
    for (std::uint64_t n = 1; n <= X + 3; ++n) naive[n] = oracle::k_free(n, k);
    const auto window = kfree::sieve_k_free(1, X + 3, k);
    std::uint64_t flag_mismatch = 0;
    for (std::uint64_t n = 1; n <= X + 3; ++n) flag_mismatch += window.is_k_free(n) != naive[n];
    o.require(flag_mismatch == 0, "sieve flags differ from per-n test for k=" + std::to_string(k));

    // every x <= X through the prefix sums of the naive flags; the library's
    // counting entry points are called on a dense grid of x values
    std::vector<std::uint64_t> S(X + 1, 0);
    for (std::uint64_t n = 1; n <= X; ++n) S[n] = S[n - 1] + naive[n];
    for (std::int64_t h : {1, -1, 3}) {
      const kfree::PairParams params(k, h);
      std::vector<std::uint64_t> N(X + 1, 0);
      for (std::uint64_t n = 1; n <= X; ++n) {
        const std::int64_t m = static_cast<std::int64_t>(n) + h;
        const bool both = naive[n] && m > 0 && naive[static_cast<std::uint64_t>(m)];
        N[n] = N[n - 1] + both;
      }
      // single-n ranges give the library's verdict for each n, so prefix sums
      // of those verdicts compare N_{k,h}(x) at every x <= X
      std::uint64_t mismatches = 0, acc = 0;
      for (std::uint64_t n = 1; n <= X; ++n) {
        acc += kfree::count_pairs_range(n, n, params);
        mismatches += acc != N[n];
      }
      for (std::uint64_t x = 1; x <= X; x += (x < 3000 ? 1 : 97)) mismatches += kfree::count_pairs(x, params) != N[x];
      mismatches += kfree::count_pairs(X, params) != N[X];
      o.require(mismatches == 0, "N_{k,h}(x) mismatch for k=" + std::to_string(k) + " h=" + std::to_string(h));
    }
    std::uint64_t smis = 0, sacc = 0;
    for (std::uint64_t n = 1; n <= X; ++n) {
      sacc += kfree::count_k_free(n, n, k);
      smis += sacc != S[n];
    }
    for (std::uint64_t x = 1; x <= X; x += (x < 3000 ? 1 : 89)) smis += kfree::count_k_free(1, x, k) != S[x];
    o.require(smis == 0, "S_k(x) mismatch for k=" + std::to_string(k));
  }
  o.note("S_k(x) and N_{k,h}(x) (h in {1,-1,3}) equal per-n counts at every x <= 10^5, k in {2,3,4}");
}

void ac2(Outcome& o) {
  const kfree::PairParams params(2, 1);
  const std::uint64_t x = 10'000'000;
  const std::uint64_t N = kfree::count_pairs(x, params);
  const auto e5 = kfree::euler_constant(params, 100'000);
  const auto e6 = kfree::euler_constant(params, 1'000'000);
  const mpq_class gap = abs(mpq_class(mpz_class(N), mpz_class(x)) - e5.partial);
  const mpq_class diff = abs(e6.partial - e5.partial);
  o.require(gap < mpq_class(2, 1000), "|N/x - partial(10^5)| >= 2e-3");
  o.require(diff <= e5.tail_bound, "|partial(10^6) - partial(10^5)| > tail_bound(10^5)");
  o.note("N(10^7)=" + std::to_string(N) + ", partial(10^5)=" + e5.decimal.substr(0, 12) + ", |N/x - c|=" +
         fmt(gap.get_d()) + " < 0.002, |c6-c5|=" + fmt(diff.get_d()) + " <= tail " + fmt(e5.tail_bound.get_d()));
}

void ac3(Outcome& o) {
  const kfree::PairParams params(2, 1);
  const mpq_class c = kfree::euler_constant(params, 1'000'000).partial;
  std::vector<std::pair<double, double>> samples;
  std::string vals;
  for (std::uint64_t x : {10'000ull, 100'000ull, 1'000'000ull, 10'000'000ull}) {
    const std::uint64_t N = kfree::count_pairs(x, params);
    const double err = std::abs(mpq_class(mpz_class(N) - c * mpz_class(x)).get_d());
    samples.push_back({static_cast<double>(x), err});
    vals += (vals.empty() ? "" : ",") + fmt(err, 5);
  }
  const auto fit = analysis::fit_exponent(samples);
  o.require(fit.slope <= 2.0 / 3.0 + 0.05, "fitted slope " + fmt(fit.slope) + " > 2/3 + 0.05");
  o.note("|N - c x| = [" + vals + "], slope " + fmt(fit.slope) + " <= 0.7167; omega(2) = " +
         analysis::omega(2).decimal(4) + " reported only");
}

kfree::LinearFormSystem random_system(unsigned k) {
  while (true) {
    const std::size_t r = oracle::uniform(1, 3);
    std::vector<kfree::LinearForm> forms;
    for (std::size_t i = 0; i < r; ++i)
      forms.push_back({oracle::uniform_signed(1, 4), oracle::uniform_signed(-12, 12)});
    try {
      return kfree::LinearFormSystem(k, forms);
    } catch (const ParameterError&) {
    }
  }
}

void ac4(Outcome& o) {
  for (int t = 0; t < 100; ++t) {
    const unsigned k = static_cast<unsigned>(oracle::uniform(2, 3));
    const auto sys = random_system(k);
    const std::uint64_t x = oracle::uniform(1, 10'000);
    const double w = static_cast<double>(oracle::uniform(2, 30)) + 0.5;
    const double z = w + static_cast<double>(oracle::uniform(0, 200));
    const auto s = kfree::buchstab_check(x, sys, w, z);
    o.require(s.lhs == s.rhs, "Buchstab lhs != rhs at draw " + std::to_string(t));
  }
  int draws = 0;
  std::int64_t worst = 0;
  while (draws < 100) {
    const auto sys = random_system(static_cast<unsigned>(oracle::uniform(2, 3)));
    const auto n = static_cast<std::int64_t>(oracle::uniform(1, 1'000'000));
    bool zero = false;
    for (const auto& f : sys.forms()) zero = zero || f(n) == 0;
    if (zero) continue;
    const double w = static_cast<double>(oracle::uniform(2, 100));
    const double z = static_cast<double>(oracle::uniform(2, 100'000));
    const auto r = kfree::sieve_lemma_residual(n, sys, w, z);
    o.require(std::llabs(r.exact_lhs - r.truncated) <= r.error_count, "sieve lemma residual exceeds error count");
    worst = std::max<std::int64_t>(worst, std::llabs(r.exact_lhs - r.truncated));
    ++draws;
  }
  o.note("100 Buchstab draws exact; 100 sieve-lemma draws within error count (max residual " +
         std::to_string(worst) + ")");
}

void ac5(Outcome& o) {
  std::size_t checked = 0;
  for (std::uint64_t D = 2; D <= 10'000; ++D) {
    const auto r = static_cast<std::uint64_t>(std::lround(std::sqrt(static_cast<double>(D))));
    if (r * r == D) continue;
    const auto f = pell::fundamental_solution(D);
    o.require(f.T * f.T - mpz_class(D) * f.U * f.U == 1, "T^2 - D U^2 != 1 at D=" + std::to_string(D));
    ++checked;
  }
  // minimality: no U below the fundamental one (and at most 10^6) solves the equation
  std::size_t minimal = 0;
  for (std::uint64_t D = 2; D <= 200; ++D) {
    const auto r = static_cast<std::uint64_t>(std::lround(std::sqrt(static_cast<double>(D))));
    if (r * r == D) continue;
    const auto f = pell::fundamental_solution(D);
    const std::uint64_t limit = f.U <= 1'000'000 ? f.U.get_ui() : 1'000'001;
    std::uint64_t first = 0;
    for (std::uint64_t U = 1; U < limit && first == 0; ++U) {
      const unsigned __int128 t = static_cast<unsigned __int128>(D) * U * U + 1;
      auto s = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(t)));
      while (static_cast<unsigned __int128>(s) * s > t) --s;
      while (static_cast<unsigned __int128>(s + 1) * (s + 1) <= t) ++s;
      if (static_cast<unsigned __int128>(s) * s == t) first = U;
    }
    o.require(first == 0, "smaller solution found at D=" + std::to_string(D));
    ++minimal;
  }
  std::ostringstream out, err;
  const int code = cli::run({"pell-s", "--X", "10", "--alpha", "0.5"}, out, err);
  const std::string text = out.str();
  o.require(code == 0 && text.substr(text.rfind('\n', text.size() - 2) + 1) == "10,1/2,1\n", "pell-s(10, 0.5) != 1");
  o.require(pell::count_S(10, mpq_class(1, 2)) == 1, "count_S(10, 1/2) != 1");
  o.note(std::to_string(checked) + " nonsquare D <= 10^4 exact; minimality for " + std::to_string(minimal) +
         " D <= 200 (U <= 10^6); pell-s(10, 0.5) = 1");
}

void ac6(Outcome& o) {
  double prev = 2.0;
  std::string vals;
  for (std::uint64_t X : {1'000ull, 10'000ull, 100'000ull}) {
    const auto d = pell::density_below(X, mpq_class(3, 2));
    o.require(d.fraction <= prev, "fraction increased at X=" + std::to_string(X));
    prev = d.fraction;
    vals += (vals.empty() ? "" : ", ") + fmt(d.fraction);
  }
  o.note("fractions at 10^3, 10^4, 10^5: " + vals);
}

void ac7(Outcome& o) {
  constexpr std::uint32_t X = 1'000'000;
  const auto spf = spf_table(X + 1);
  std::vector<std::uint64_t> brute;
  for (std::uint32_t n = 1; n <= X; ++n)
    if (squarefull_by_spf(n, spf)) brute.push_back(n);
  o.require(squarefull::enumerate_squarefull(X) == brute, "enumerate_squarefull(10^6) differs from brute force");
  // every smaller x is a prefix of the same list
  for (std::uint64_t x : {1ull, 2ull, 7ull, 8ull, 9ull, 100ull, 9999ull, 123456ull}) {
    const auto got = squarefull::enumerate_squarefull(x);
    std::size_t expect = 0;
    while (expect < brute.size() && brute[expect] <= x) ++expect;
    o.require(got.size() == expect && std::equal(got.begin(), got.end(), brute.begin()), "prefix mismatch");
  }
  o.require(squarefull::consecutive_pairs(10'000) == std::vector<std::uint64_t>{8, 288, 675, 9800},
            "consecutive_pairs(10^4)");
  const auto pairs = squarefull::consecutive_pairs(X);
  std::vector<std::uint64_t> brute_pairs;
  for (std::uint32_t n = 1; n < X; ++n)
    if (squarefull_by_spf(n, spf) && squarefull_by_spf(n + 1, spf)) brute_pairs.push_back(n);
  o.require(pairs == brute_pairs, "consecutive_pairs(10^6) differs from brute force");
  for (std::uint64_t n : pairs) {
    const std::uint64_t m = squarefull::recurrence_step(n);
    o.require(m == 4 * n * (n + 1) && oracle::squarefull(m) && oracle::squarefull(m + 1),
              "recurrence image not a pair for n=" + std::to_string(n));
  }
  const std::uint64_t big = 100'000'000;
  const std::uint64_t N8 = squarefull::count_consecutive(big);
  const double ratio = std::log(static_cast<double>(N8)) / std::log(static_cast<double>(big));
  o.note(std::to_string(brute.size()) + " square-full n <= 10^6 match; " + std::to_string(pairs.size()) +
         " pairs closed under n -> 4n(n+1); N(10^8)=" + std::to_string(N8) + ", log N/log x = " + fmt(ratio) +
         " vs 29/100 (reported)");
}

detmethod::VarietyParams random_params(const detmethod::Equation& eq) {
  using namespace detmethod;
  while (true) {
    mpq_class D(oracle::uniform(2, 60), oracle::uniform(1, 3)), E(oracle::uniform(2, 60), oracle::uniform(1, 3));
    D.canonicalize();
    E.canonicalize();
    VarietyParams p{eq, oracle::uniform(1'000, 10'000'000), D, E,
                    oracle::uniform(0, 1) ? BoxConvention::DyadicOpen : BoxConvention::HalfClosed};
    const Box b = p.box();
    if (b.d.empty() || b.e.empty() || b.u.empty() || b.v.empty()) continue;
    const double work = static_cast<double>(b.d.size()) * b.e.size() * b.u.size();
    if (work > 3e6 || work < 100) continue;
    return p;
  }
}

void ac8(Outcome& o) {
  using namespace detmethod;
  const Equation eqs[] = {{2, 1, 1}, {3, 1, 1}, {3, 2, 1}};
  std::size_t sets = 0, quads = 0, certs = 0;
  for (const auto& eq : eqs) {
    for (int t = 0; t < 50; ++t) {
      const auto p = random_params(eq);
      const auto sols = brute_count(p);
      o.require(congruence_count(p) == sols.size(), "congruence_count != |brute_count|");
      std::uint64_t M = 0;
      try {
        M = choose_M(p);
      } catch (const ParameterError&) {
        M = oracle::uniform(1, 50);  // UV <= 1: any grid still has to partition
      }
      const auto plan = subdivide(p, M);
      for (const auto& q : sols) {
        std::size_t hits = 0;
        for (const auto& I : plan.intervals) hits += I.s0 < q.s() && q.s() <= I.s1;
        o.require(hits == 1, "solution not in exactly one interval");
      }
      const auto cs = certify_plan(plan, sols, 1, 1);
      std::size_t covered = 0;
      for (const auto& c : cs) {
        covered += c.J;
        if (!c.has_polynomial()) continue;
        ++certs;
        for (const auto& q : sols)
          if (c.s0 < q.s() && q.s() <= c.s0 + plan.delta)
            o.require(evaluate_certificate(c, q.s(), q.t()) == 0, "certificate does not vanish");
      }
      o.require(covered == sols.size(), "interval conservation");
      quads += sols.size();
      ++sets;
    }
  }
  o.note(std::to_string(sets) + " parameter sets, " + std::to_string(quads) + " solutions, " + std::to_string(certs) +
         " certificates verified");

  // an auxiliary polynomial in every interval once M is large enough: x = 10^6, DE >= 10^3
  const std::pair<int, int> boxes[] = {{32, 32}, {10, 100}, {100, 10}, {40, 50}};
  bool reached = true;
  std::string report;
  for (const auto& [Dn, En] : boxes) {
    const VarietyParams p{{2, 1, 1}, 1'000'000, Dn, En};
    const auto sols = brute_count(p);
    const std::uint64_t M = choose_M(p);
    std::string fr;
    double at4 = 0;
    // M / 64 is a coarse contrast grid, reported only
    for (const std::uint64_t grid : {std::max<std::uint64_t>(1, M / 64), M, 2 * M, 4 * M}) {
      const auto cs = certify_plan(subdivide(p, grid), sols, 1, 1);
      std::size_t deficient = 0, fullest = 0;
      for (const auto& c : cs) {
        deficient += c.rank < c.H;
        fullest = std::max(fullest, c.J);
      }
      const double frac = cs.empty() ? 1.0 : static_cast<double>(deficient) / static_cast<double>(cs.size());
      fr += (fr.empty() ? "" : " / ") + fmt(frac, 4) + " (max J " + std::to_string(fullest) + ")";
      if (grid == 4 * M) at4 = frac;
    }
    reached = reached && at4 == 1.0;
    report += (report.empty() ? " " : "; ") + std::string("D=") + std::to_string(Dn) + ",E=" + std::to_string(En) +
              ",M=" + std::to_string(M) + ",J=" + std::to_string(sols.size()) + ": " + fr;
  }
  o.require(reached, "rank-deficient fraction below 1.0 at 4M:" + report);
  o.note("rank<H fraction at M/64, M, 2M, 4M:" + report);
}

void ac9(Outcome& o) {
  constexpr std::uint64_t L = 100'000;
  std::size_t pairs = 0, points = 0;
  for (std::uint64_t d = 1; d <= 30; ++d)
    for (std::uint64_t e = 1; e <= 30; ++e) {
      if (std::gcd(d, e) != 1) continue;
      std::vector<std::pair<std::uint64_t, std::uint64_t>> uv;
      for (std::uint64_t u = 1; u <= L; ++u) {
        const std::uint64_t num = d * d * u + 1;
        if (num % (e * e) == 0 && num / (e * e) <= L) uv.push_back({u, num / (e * e)});
      }
      bool ap = true;
      for (std::size_t i = 1; i < uv.size(); ++i)
        ap = ap && uv[i].first - uv[i - 1].first == e * e && uv[i].second - uv[i - 1].second == d * d;
      const auto line = detmethod::kappa_minus1_line(static_cast<std::int64_t>(d), static_cast<std::int64_t>(e));
      for (auto [u, v] : uv) ap = ap && line.contains(detmethod::SolutionQuad{d, e, u, v});
      // the progression has no gaps: its first term is the least positive u
      ap = ap && (uv.empty() || uv.front().first <= e * e);
      o.require(ap, "solutions for (d,e)=(" + std::to_string(d) + "," + std::to_string(e) + ") not one progression");
      ++pairs;
      points += uv.size();
    }
  using namespace detmethod;
  std::size_t boxes = 0;
  std::uint64_t total = 0, k3 = 0;
  std::vector<VarietyParams> tests = {{{2, 1, 1}, 1'000'000, 30, 40}, {{2, 1, 1}, 1'000'000, 10, 100},
                                      {{2, 1, 1}, 100'000, 8, 8},     {{2, 1, 1}, 10, 100, 100},
                                      {{2, 1, 1}, 1'000'000, 20, 20, BoxConvention::HalfClosed}};
  for (int t = 0; t < 10; ++t) tests.push_back(random_params({2, 1, 1}));
  for (const auto& p : tests) {
    const auto split = count_split(p);
    o.require(split.on_line + split.off_line == split.total && split.total == brute_count(p).size(),
              "count_split conservation");
    total += split.total;
    k3 += split.on_kappa3;
    ++boxes;
  }
  o.note(std::to_string(pairs) + " coprime (d,e), " + std::to_string(points) + " points, all on one AP; " +
         std::to_string(boxes) + " boxes conserve (" + std::to_string(total) + " solutions, " + std::to_string(k3) +
         " on kappa=3 lines)");
}

void ac10(Outcome& o) {
  const Surd w = analysis::omega(2);
  // independent evaluation: (26 + sqrt 433)/81 with 64-bit long double
  const long double ref = (26.0L + std::sqrt(433.0L)) / 81.0L;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12Lf", std::floor(ref * 1e12L) / 1e12L);
  o.require(w.decimal(12) == buf, "omega(2) digits " + w.decimal(12) + " vs " + buf);
  o.require(w.exact() == "(26+sqrt(433))/81", "omega(2) closed form");
  o.require(analysis::f_psi(2, mpq_class(2, 3)) == mpq_class(7, 12), "f_2(2/3) != 7/12");
  o.require(analysis::squarefull_f(mpq_class(2, 5)) == mpq_class(29, 100), "f(2/5) != 29/100");
  o.require(analysis::pell_bound(mpq_class(5, 8)) == mpq_class(5, 8), "pell_bound(5/8) != 5/8");
  std::size_t comparisons = 0;
  for (unsigned k = 2; k <= 30; ++k) {
    const auto r = analysis::exponent_table(k);  // throws if a required chain fails
    for (const auto& [name, ok] : r.comparisons) {
      const bool conditional = name.find("iff") != std::string::npos;
      o.require(ok || (conditional && k <= 4), name + " at k=" + std::to_string(k));
      ++comparisons;
    }
  }
  const auto c = analysis::critical_psi();
  o.require(c.matches_omega && c.linear_branch == c.quadratic_branch, "critical psi");
  o.note("omega(2) = " + w.decimal(12) + " = " + w.exact() + "; f_2(2/3)=7/12, f(2/5)=29/100, pell_bound(5/8)=5/8; " +
         std::to_string(comparisons) + " exact comparisons");
}

}  // namespace

int main() {
  criterion(1, "sieve oracle equivalence", 30, ac1);
  criterion(2, "Euler-constant consistency", 60, ac2);
  criterion(3, "error-exponent sanity", 0, ac3);
  criterion(4, "Buchstab and sieve-lemma identities", 0, ac4);
  criterion(5, "Pell exactness", 60, ac5);
  criterion(6, "Pell density trend", 0, ac6);
  criterion(7, "square-full enumeration and pairs", 0, ac7);
  criterion(8, "determinant-method soundness", 0, ac8);
  criterion(9, "line structure", 0, ac9);
  criterion(10, "exponent algebra", 1, ac10);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
