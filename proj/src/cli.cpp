#include "ntbench/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ntbench/analysis.hpp"
#include "ntbench/errors.hpp"
#include "ntbench/kfree.hpp"
#include "ntbench/lines.hpp"
#include "ntbench/pell.hpp"
#include "ntbench/squarefull.hpp"

namespace ntbench::cli {

namespace {

using analysis::parse_rational;

std::string rational_str(const mpq_class& q) { return q.get_str(); }

std::uint64_t parse_u64(const std::string& text, const char* name) {
  const mpq_class q = parse_rational(text);
  if (q.get_den() != 1 || q < 0 || !mpz_fits_ulong_p(q.get_num_mpz_t()))
    throw ParameterError(std::string("--") + name + " must be a non-negative integer, got " + text);
  return q.get_num().get_ui();
}

std::int64_t parse_i64(const std::string& text, const char* name) {
  const mpq_class q = parse_rational(text);
  if (q.get_den() != 1 || !mpz_fits_slong_p(q.get_num_mpz_t()))
    throw ParameterError(std::string("--") + name + " must be an integer, got " + text);
  return q.get_num().get_si();
}

unsigned parse_unsigned(const std::string& text, const char* name) {
  const std::uint64_t v = parse_u64(text, name);
  if (v > 1'000'000) throw ParameterError(std::string("--") + name + " is too large");
  return static_cast<unsigned>(v);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<kfree::LinearForm> parse_forms(const std::string& text) {
  std::vector<kfree::LinearForm> forms;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, text.find(';') != std::string::npos ? ';' : ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ParameterError("--forms entries look like a:b, got " + item);
    forms.push_back({parse_i64(item.substr(0, colon), "forms"), parse_i64(item.substr(colon + 1), "forms")});
  }
  if (forms.empty()) throw ParameterError("--forms is empty");
  return forms;
}

std::string forms_str(const std::vector<kfree::LinearForm>& forms) {
  std::string s;
  for (const auto& f : forms) {
    if (!s.empty()) s += ';';
    s += std::to_string(f.a) + ":" + std::to_string(f.b);
  }
  return s;
}

kfree::RangeConvention range_convention(const std::string& s) {
  if (s == "upto") return kfree::RangeConvention::UpTo;
  if (s == "dyadic") return kfree::RangeConvention::Dyadic;
  throw ParameterError("--convention must be upto or dyadic");
}

detmethod::BoxConvention box_convention(const std::string& s) {
  if (s == "dyadic") return detmethod::BoxConvention::DyadicOpen;
  if (s == "halfclosed") return detmethod::BoxConvention::HalfClosed;
  throw ParameterError("--convention must be dyadic or halfclosed");
}

// Emits the metadata line; shard counts are left out so output does not depend on them.
struct Meta {
  std::string command;
  std::vector<std::pair<std::string, std::string>> fields;

  std::string line() const {
    std::string s = std::string("# ntbench ") + kVersion + " " + command;
    for (const auto& [k, v] : fields) s += " " + k + "=" + v;
    return s + "\n";
  }
};

struct Options {
  std::string output;
  unsigned shards = 1;
};

struct Variety {
  std::string k = "2", l = "1", h = "1", x, D, E, convention = "dyadic";

  void add(CLI::App* sub) {
    sub->add_option("--k", k, "exponent k (>= 2)");
    sub->add_option("--l", l, "exponent l (1 <= l < k)");
    sub->add_option("--h", h, "right-hand side h (nonzero)");
    sub->add_option("--x", x, "size parameter x")->required();
    sub->add_option("--D", D, "d-scale (rational)")->required();
    sub->add_option("--E", E, "e-scale (rational)")->required();
    sub->add_option("--convention", convention, "dyadic (D<d<2D) or halfclosed (D/2<d<=D)");
  }

  detmethod::VarietyParams params() const {
    detmethod::VarietyParams p{{parse_unsigned(k, "k"), parse_unsigned(l, "l"), parse_i64(h, "h")},
                               parse_u64(x, "x"), parse_rational(D), parse_rational(E),
                               box_convention(convention)};
    p.eq.validate();
    if (p.D <= 0 || p.E <= 0) throw ParameterError("--D and --E must be positive");
    return p;
  }

  void describe(Meta& m) const {
    const auto p = params();
    m.fields.insert(m.fields.end(), {{"k", std::to_string(p.eq.k)}, {"l", std::to_string(p.eq.l)},
                                     {"h", std::to_string(p.eq.h)}, {"x", std::to_string(p.x)},
                                     {"D", rational_str(p.D)}, {"E", rational_str(p.E)},
                                     {"convention", convention}});
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Experiments on k-free values, square-full pairs, Pell units and the determinant method",
               "ntbench"};
  app.set_help_flag("--help", "print help and exit");  // -h would clash with the shift option --h
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options opt;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--output", opt.output, "write results to this file instead of stdout");
    sub->add_option("--shards", opt.shards, "worker count (output does not depend on it)")
        ->check(CLI::Range(1u, 256u));
  };
  std::function<void(std::ostream&)> action;

  // kfree-pairs
  std::string x_s, k_s = "2", h_s = "1", conv_s = "upto", forms_s, cutoff_s = "100000";
  auto* pairs = app.add_subcommand("kfree-pairs", "count n with n and n+h both k-free");
  pairs->add_option("--x", x_s, "upper end (upto) or window start (dyadic)")->required();
  pairs->add_option("--k", k_s, "k >= 2");
  pairs->add_option("--h", h_s, "shift h != 0");
  pairs->add_option("--convention", conv_s, "upto (1<=n<=x) or dyadic (x<n<=2x)");
  common(pairs);
  pairs->callback([&] {
    action = [&](std::ostream& os) {
      const std::uint64_t x = parse_u64(x_s, "x");
      const kfree::PairParams params(parse_unsigned(k_s, "k"), parse_i64(h_s, "h"));
      const auto conv = range_convention(conv_s);
      Meta m{"kfree-pairs", {{"x", std::to_string(x)}, {"k", std::to_string(params.k)},
                             {"h", std::to_string(params.h)}, {"convention", conv_s}}};
      const auto count = kfree::count_pairs(x, params, conv, opt.shards);
      os << m.line() << "x,k,h,convention,count\n"
         << x << ',' << params.k << ',' << params.h << ',' << conv_s << ',' << count << '\n';
    };
  });

  auto* tuples = app.add_subcommand("kfree-tuples", "count n with every a_i n + b_i k-free");
  tuples->add_option("--x", x_s, "upper end (upto) or window start (dyadic)")->required();
  tuples->add_option("--k", k_s, "k >= 2");
  tuples->add_option("--forms", forms_s, "forms as a:b pairs, e.g. 1:0,1:2")->required();
  tuples->add_option("--convention", conv_s, "upto or dyadic");
  common(tuples);
  tuples->callback([&] {
    action = [&](std::ostream& os) {
      const std::uint64_t x = parse_u64(x_s, "x");
      const kfree::LinearFormSystem sys(parse_unsigned(k_s, "k"), parse_forms(forms_s));
      const auto conv = range_convention(conv_s);
      const std::string fs = forms_str(sys.forms());
      Meta m{"kfree-tuples", {{"x", std::to_string(x)}, {"k", std::to_string(sys.k())},
                              {"forms", fs}, {"convention", conv_s}}};
      const auto count = kfree::count_tuple(x, sys, conv);
      os << m.line() << "x,k,forms,convention,count\n"
         << x << ',' << sys.k() << ',' << fs << ',' << conv_s << ',' << count << '\n';
    };
  });

  auto* constants = app.add_subcommand("constants", "truncated Euler product with certified tail");
  constants->add_option("--k", k_s, "k >= 2");
  constants->add_option("--h", h_s, "shift h for the pair n, n+h");
  constants->add_option("--forms", forms_s, "use a system of forms a:b instead of a pair");
  constants->add_option("--cutoff", cutoff_s, "prime cutoff P");
  common(constants);
  constants->callback([&] {
    action = [&](std::ostream& os) {
      const unsigned k = parse_unsigned(k_s, "k");
      const std::uint64_t cutoff = parse_u64(cutoff_s, "cutoff");
      kfree::EulerConstantEstimate est;
      std::string label, value;
      if (forms_s.empty()) {
        const kfree::PairParams params(k, parse_i64(h_s, "h"));
        est = kfree::euler_constant(params, cutoff);
        label = "h";
        value = std::to_string(params.h);
      } else {
        const kfree::LinearFormSystem sys(k, parse_forms(forms_s));
        est = kfree::euler_constant(sys, cutoff);
        label = "forms";
        value = forms_str(sys.forms());
      }
      Meta m{"constants", {{"k", std::to_string(k)}, {label, value}, {"cutoff", std::to_string(cutoff)}}};
      os << m.line() << "k," << label << ",cutoff,partial,tail_bound,lower_bound\n"
         << k << ',' << value << ',' << cutoff << ',' << est.decimal << ','
         << rational_str(est.tail_bound) << ','
         << kfree::to_decimal(est.partial - est.tail_bound, 20) << '\n';
    };
  });

  bool list = false;
  auto* sqfull = app.add_subcommand("squarefull", "consecutive square-full pairs up to x");
  sqfull->add_option("--x", x_s, "upper bound x")->required();
  sqfull->add_flag("--list", list, "print the pairs (n, n+1) instead of the count row");
  common(sqfull);
  sqfull->callback([&] {
    action = [&](std::ostream& os) {
      const std::uint64_t x = parse_u64(x_s, "x");
      Meta m{"squarefull", {{"x", std::to_string(x)}, {"list", list ? "1" : "0"}}};
      const auto found = squarefull::consecutive_pairs(x, opt.shards);
      os << m.line();
      if (list) {
        os << "n,n_plus_1\n";
        for (auto n : found) os << n << ',' << n + 1 << '\n';
        return;
      }
      std::string ratio;
      if (!found.empty() && x > 1)
        ratio = fmt_double(std::log(static_cast<double>(found.size())) / std::log(static_cast<double>(x)));
      os << "x,count,log_ratio,target\n" << x << ',' << found.size() << ',' << ratio << ",29/100\n";
    };
  });

  std::string xmax_s, X_s, alpha_s = "0.5", theta_s;
  auto* pfund = app.add_subcommand("pell-fundamental", "fundamental Pell solutions for 2 <= D <= xmax");
  pfund->add_option("--xmax", xmax_s, "largest D")->required();
  common(pfund);
  pfund->callback([&] {
    action = [&](std::ostream& os) {
      const std::uint64_t xmax = parse_u64(xmax_s, "xmax");
      if (xmax < 2) throw ParameterError("--xmax must be >= 2");
      if (xmax > 100'000) throw BudgetExceeded("pell-fundamental: --xmax above 10^5");
      Meta m{"pell-fundamental", {{"xmax", std::to_string(xmax)}}};
      os << m.line() << "D,T,U,log_eps\n";
      for (std::uint64_t D = 2; D <= xmax; ++D) {
        if (!pell::cf_sqrt(D)) continue;
        const auto f = pell::fundamental_solution(D);
        os << D << ',' << f.T.get_str() << ',' << f.U.get_str() << ','
           << f.log_eps.str(20, std::ios_base::fixed) << '\n';
      }
    };
  });

  auto* ps = app.add_subcommand("pell-s", "S(X, alpha) over nonsquare X < D < 2X");
  ps->add_option("--X", X_s, "window start X")->required();
  ps->add_option("--alpha", alpha_s, "alpha >= 1/2 (exact decimal or p/q)");
  common(ps);
  ps->callback([&] {
    action = [&](std::ostream& os) {
      const std::uint64_t X = parse_u64(X_s, "X");
      const mpq_class alpha = parse_rational(alpha_s);
      Meta m{"pell-s", {{"X", std::to_string(X)}, {"alpha", rational_str(alpha)}, {"window", "X<D<2X"}}};
      const auto s = pell::count_S(X, alpha, opt.shards);
      os << m.line() << "X,alpha,S_count\n" << X << ',' << rational_str(alpha) << ',' << s << '\n';
    };
  });

  auto* pd = app.add_subcommand("pell-density", "#{1 < D <= X nonsquare : eps_D <= D^theta}");
  pd->add_option("--X", X_s, "upper end X")->required();
  pd->add_option("--theta", theta_s, "theta >= 0 (exact decimal or p/q)")->required();
  common(pd);
  pd->callback([&] {
    action = [&](std::ostream& os) {
      const std::uint64_t X = parse_u64(X_s, "X");
      const mpq_class theta = parse_rational(theta_s);
      Meta m{"pell-density", {{"X", std::to_string(X)}, {"theta", rational_str(theta)}, {"window", "1<D<=X"}}};
      const auto d = pell::density_below(X, theta, opt.shards);
      os << m.line() << "X,theta,count,fraction\n"
         << X << ',' << rational_str(theta) << ',' << d.count << ','
         << kfree::to_decimal(mpq_class(mpz_class(d.count), mpz_class(X)), 12) << '\n';
    };
  });

  Variety var;
  auto* vc = app.add_subcommand("variety-count", "solutions of e^k v^l - d^k u^l = h in a box");
  var.add(vc);
  common(vc);
  vc->callback([&] {
    action = [&](std::ostream& os) {
      const auto p = var.params();
      Meta m{"variety-count", {}};
      var.describe(m);
      const auto sols = detmethod::brute_count(p, detmethod::kBruteBudget, opt.shards);
      const auto cong = detmethod::congruence_count(p);
      if (cong != sols.size()) throw InvariantViolation("variety-count: congruence and brute counts differ");
      std::string on, off;
      if (p.eq.k == 2 && p.eq.l == 1 && p.eq.h == 1) {
        const auto split = detmethod::count_split(p);
        on = std::to_string(split.on_line);
        off = std::to_string(split.off_line);
      }
      const std::string ts = sols.empty() ? "" : fmt_double(detmethod::ts_deviation_ratio(p, sols));
      os << m.line() << "k,l,h,x,D,E,convention,total,congruence,on_line,off_line,ts_ratio\n"
         << p.eq.k << ',' << p.eq.l << ',' << p.eq.h << ',' << p.x << ',' << rational_str(p.D) << ','
         << rational_str(p.E) << ',' << var.convention << ',' << sols.size() << ',' << cong << ','
         << on << ',' << off << ',' << ts << '\n';
    };
  });

  std::string A_s = "1", B_s = "1", M_s, factor_s = "1";
  auto* cert = app.add_subcommand("certify", "auxiliary-polynomial certificates per interval (JSON)");
  var.add(cert);
  cert->add_option("--A", A_s, "degree in s");
  cert->add_option("--B", B_s, "degree in t");
  cert->add_option("--M", M_s, "number of intervals per unit D/E (default: choose_M)");
  cert->add_option("--M-factor", factor_s, "multiply M by this integer");
  common(cert);
  cert->callback([&] {
    action = [&](std::ostream& os) {
      const auto p = var.params();
      const unsigned A = parse_unsigned(A_s, "A"), B = parse_unsigned(B_s, "B");
      if ((A + 1) * (B + 1) > 64) throw BudgetExceeded("certify: (A+1)(B+1) above 64");
      const std::uint64_t base_M = M_s.empty() ? detmethod::choose_M(p) : parse_u64(M_s, "M");
      const std::uint64_t M = base_M * parse_u64(factor_s, "M-factor");
      if (M == 0) throw ParameterError("certify: M must be positive");
      const auto plan = detmethod::subdivide(p, M);
      const auto sols = detmethod::brute_count(p, detmethod::kBruteBudget, opt.shards);
      const auto certs = detmethod::certify_plan(plan, sols, A, B);

      Meta m{"certify", {}};
      var.describe(m);
      nlohmann::ordered_json meta;
      meta["tool"] = std::string("ntbench ") + kVersion;
      meta["command"] = "certify";
      for (const auto& [key, value] : m.fields) meta[key] = value;
      meta["A"] = A;
      meta["B"] = B;
      meta["M"] = M;
      nlohmann::ordered_json records = nlohmann::ordered_json::array();
      for (const auto& c : certs) {
        nlohmann::ordered_json r;
        r["interval"] = {c.s0.get_num().get_str(), c.s0.get_den().get_str(), c.M};
        r["A"] = c.A;
        r["B"] = c.B;
        r["J"] = c.J;
        r["H"] = c.H;
        r["rank"] = c.rank;
        nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
        for (const auto& z : c.coeffs) coeffs.push_back(z.get_str());
        r["coeffs"] = coeffs;
        r["coeff_bits"] = c.coeff_bits;
        r["witness_rows"] = c.witness_rows;
        records.push_back(std::move(r));
      }
      nlohmann::ordered_json doc;
      doc["meta"] = meta;
      doc["certificates"] = records;
      os << doc.dump(2) << '\n';
    };
  });

  bool stress = false;
  std::string lx_s, lD_s, lE_s, lconv_s = "dyadic";
  auto* lines = app.add_subcommand("lines", "line families on e^2 v - d^2 u = 1 meeting the box");
  lines->add_option("--x", lx_s, "size parameter x")->required();
  lines->add_option("--D", lD_s, "d-scale")->required();
  lines->add_option("--E", lE_s, "e-scale")->required();
  lines->add_option("--convention", lconv_s, "dyadic or halfclosed");
  lines->add_flag("--stress", stress, "widen the kappa = 3 search bound 4x");
  common(lines);
  lines->callback([&] {
    action = [&](std::ostream& os) {
      const detmethod::VarietyParams p{{2, 1, 1}, parse_u64(lx_s, "x"), parse_rational(lD_s),
                                       parse_rational(lE_s), box_convention(lconv_s)};
      if (p.D <= 0 || p.E <= 0) throw ParameterError("--D and --E must be positive");
      Meta m{"lines", {{"x", std::to_string(p.x)}, {"D", rational_str(p.D)}, {"E", rational_str(p.E)},
                       {"convention", lconv_s}, {"stress", stress ? "1" : "0"}}};
      const auto search = detmethod::enumerate_lines(p, {stress ? 4.0 : 1.0});
      const auto box = p.box();
      os << m.line()
         << "kappa,base_d,base_e,base_u,base_v,step_d,step_e,step_u,step_v,lambda,points_in_box\n";
      for (const auto& l : search.lines) {
        os << l.kappa;
        for (auto c : l.base) os << ',' << c;
        for (auto c : l.step) os << ',' << c;
        os << ',' << l.lambda_pattern() << ',' << detmethod::points_in_box(l, box).size() << '\n';
      }
    };
  });

  auto* expo = app.add_subcommand("exponents", "closed-form exponents for given k");
  expo->add_option("--k", k_s, "k >= 2");
  common(expo);
  expo->callback([&] {
    action = [&](std::ostream& os) {
      const auto report = analysis::exponent_table(parse_unsigned(k_s, "k"));
      Meta m{"exponents", {{"k", report.label.substr(2)}, {"note", "epsilon_terms_omitted"}}};
      os << m.line() << "name,exact,decimal\n";
      for (const auto& e : report.entries) os << e.name << ',' << e.value.exact() << ',' << e.decimal << '\n';
    };
  });

  std::string input;
  auto* fit = app.add_subcommand("fit", "least-squares slope of ln y against ln x");
  fit->add_option("--input", input, "CSV file with x,y rows")->required();
  common(fit);
  fit->callback([&] {
    action = [&](std::ostream& os) {
      std::ifstream in(input);
      if (!in) throw ParameterError("fit: cannot read " + input);
      std::vector<std::pair<double, double>> samples;
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) continue;
        try {
          samples.emplace_back(parse_rational(a).get_d(), parse_rational(b).get_d());
        } catch (const ParameterError&) {
          if (samples.empty()) continue;  // header row
          throw;
        }
      }
      const auto r = analysis::fit_exponent(samples);
      Meta m{"fit", {{"input", input}}};
      os << m.line() << "slope,intercept,residual,n_samples\n"
         << fmt_double(r.slope) << ',' << fmt_double(r.intercept) << ',' << fmt_double(r.residual) << ','
         << r.n_samples << '\n';
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto active = app.get_subcommands();
    out << (active.empty() ? app.help() : active.back()->help());
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParameterError;
  }

  try {
    std::ostringstream buffer;
    action(buffer);
    if (opt.output.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(opt.output, std::ios::binary);
      if (!file) throw ParameterError("cannot write " + opt.output);
      file << buffer.str();
    }
    return kOk;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kParameterError;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kBudgetExceeded;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kInvariantViolation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInvariantViolation;
  }
}

}  // namespace ntbench::cli
