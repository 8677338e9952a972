#include "sudler/cli.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sudler/birkhoff.hpp"
#include "sudler/bounds.hpp"
#include "sudler/csv.hpp"
#include "sudler/errors.hpp"
#include "sudler/fibcore.hpp"
#include "sudler/product.hpp"
#include "sudler/verify.hpp"

namespace sudler::cli {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(const DoubleDouble& v) { return dd::to_string(v, 17); }

std::string errnum(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void print_product(std::ostream& out, const char* label, const ProductResult& r) {
  out << label << " = " << num(dd::exp(r.log_value)) << "\n";
  out << "log " << label << " = " << num(r.log_value) << "  (err " << errnum(r.err) << ")\n";
}

BigInt parse_big(const std::string& s, const char* what) {
  BigInt v;
  if (s.empty() || v.set_str(s, 10) != 0 || v < 0)
    throw DomainError(std::string(what) + " must be a non-negative integer, got '" + s + "'");
  return v;
}

// Decimal "[-]d[.d][e[-]d]" or fraction "p/q" as an exact rational.
mpq_class parse_rational(const std::string& s) {
  mpq_class q;
  if (s.find('/') != std::string::npos) {
    if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw DomainError("cannot parse fraction '" + s + "'");
    q.canonicalize();
    return q;
  }
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
  std::string digits;
  long exp10 = 0;
  bool any = false, dot = false;
  for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
    if (s[i] == '.') {
      if (dot) throw DomainError("cannot parse number '" + s + "'");
      dot = true;
      continue;
    }
    digits += s[i];
    any = true;
    if (dot) --exp10;
  }
  if (!any) throw DomainError("cannot parse number '" + s + "'");
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(s.substr(i + 1), &used);
    } catch (const std::exception&) {
      throw DomainError("cannot parse exponent in '" + s + "'");
    }
    if (used != s.size() - i - 1 || std::abs(e) > 10000) throw DomainError("cannot parse exponent in '" + s + "'");
    exp10 += e;
    i = s.size();
  }
  if (i != s.size()) throw DomainError("cannot parse number '" + s + "'");
  BigInt m(digits, 10), p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::abs(exp10)));
  q = exp10 >= 0 ? mpq_class(m * p) : mpq_class(m, p);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

// ALPHA: a decimal, a fraction p/q, or [-]w^k / [-]omega^k.
Shift parse_shift(const std::string& s, const GoldenCtx& ctx) {
  std::string body = s;
  bool neg = false;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    neg = body[0] == '-';
    body = body.substr(1);
  }
  for (const char* prefix : {"omega^", "w^"}) {
    std::string p = prefix;
    if (body.rfind(p, 0) == 0) {
      std::string k = body.substr(p.size());
      std::size_t used = 0;
      int e = 0;
      try {
        e = std::stoi(k, &used);
      } catch (const std::exception&) {
        throw DomainError("cannot parse power in '" + s + "'");
      }
      if (used != k.size() || e < 1) throw DomainError("power in '" + s + "' must be a positive integer");
      return shift_from_power(e, neg, ctx);
    }
  }
  return shift_from_rational(parse_rational(s), ctx);
}

struct Config {
  std::optional<int> precision;
  int workers = 1;
  std::uint64_t seed = 20110101;
  std::string output;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out_default, std::ostream& err) {
  CLI::App app{"Sudler products at the golden rotation: evaluation, decomposition and verification", "sudler"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "0.1.0");

  Config cfg;
  app.add_option("--precision", cfg.precision, "fixed-point precision in bits (default 192 or SUDLER_PRECISION_BITS)");
  app.add_option("--workers", cfg.workers, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "seed for randomised checks");
  app.add_option("--output", cfg.output, "write results to this file instead of standard output");

  std::string big_arg;
  long index = 0;
  std::uint64_t count = 0, stride = 1;
  std::string alpha_arg, level = "quick";

  auto* c_fib = app.add_subcommand("fib", "Fibonacci number F_N");
  c_fib->add_option("N", index, "index")->required()->check(CLI::NonNegativeNumber);
  auto* c_zeck = app.add_subcommand("zeck", "Zeckendorf representation of N");
  c_zeck->add_option("N", big_arg, "non-negative integer")->required();
  auto* c_p = app.add_subcommand("p", "Sudler product P_K");
  c_p->add_option("K", count, "number of factors")->required();
  auto* c_q = app.add_subcommand("q", "Q_N = P_{F_N}");
  c_q->add_option("N", index, "level")->required();
  auto* c_dec = app.add_subcommand("decompose", "Q_N = A_N B_N C_N");
  c_dec->add_option("N", index, "level")->required();
  auto* c_lim = app.add_subcommand("climit", "truncated limit of the square-correction factor");
  c_lim->add_option("T", count, "number of factors")->required()->check(CLI::PositiveNumber);
  auto* c_cot = app.add_subcommand("cotsum", "sum_{r <= F_N} cot(pi r omega) and its enclosure");
  c_cot->add_option("N", index, "level")->required();
  auto* c_cotp = app.add_subcommand("cotprofile", "CSV k,partial of (-1)^N sum_{r <= k} cot(pi r omega)");
  c_cotp->add_option("N", index, "level")->required();
  auto* c_prof = app.add_subcommand("profile", "CSV k,P,logP for k <= F_N");
  c_prof->add_option("N", index, "level")->required();
  c_prof->add_option("--stride", stride, "step between emitted k")->check(CLI::PositiveNumber);
  auto* c_scan = app.add_subcommand("scan", "CSV k,logP_over_logk for 2 <= k <= KMAX");
  c_scan->add_option("KMAX", count, "scan limit")->required();
  auto* c_pert = app.add_subcommand("perturbed", "prod_{r <= F_N} |2 sin pi(r omega + ALPHA)|");
  c_pert->add_option("N", index, "level")->required();
  c_pert->add_option("ALPHA", alpha_arg, "shift: decimal, p/q, or [-]w^k")->required()->allow_extra_args(false);
  auto* c_ident = app.add_subcommand("identities", "trigonometric sum/product identities for n <= NMAX");
  c_ident->add_option("NMAX", index, "largest n")->required();
  auto* c_ver = app.add_subcommand("verify", "run the invariant suite");
  c_ver->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));

  // Negative shifts like -0.001 must not be taken for options.
  app.allow_extras(false);
  c_pert->positionals_at_end();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out_default << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out_default << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out_default << "0.1.0\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  std::unique_ptr<std::ofstream> file;
  if (!cfg.output.empty()) {
    file = std::make_unique<std::ofstream>(cfg.output, std::ios::binary);
    if (!*file) {
      err << "error: cannot open output file '" << cfg.output << "'\n";
      return kUsage;
    }
  }
  std::ostream& out = file ? *file : out_default;

  try {
    int bits = 0;
    if (cfg.precision) {
      bits = *cfg.precision;
      if (bits < kMinPrecisionBits)
        throw DomainError("--precision must be at least " + std::to_string(kMinPrecisionBits) + " bits");
    } else {
      try {
        bits = default_precision_bits();
      } catch (const PrecisionError& e) {
        throw DomainError(e.what());
      }
    }
    auto level_arg = [&](long lo) {
      if (index < lo || index > 92)
        throw DomainError("level N must lie in [" + std::to_string(lo) + ", 92], got " + std::to_string(index));
      return static_cast<int>(index);
    };
    GoldenCtx ctx(bits, 64, cfg.workers);

    if (*c_fib) {
      out << "F_" << index << " = " << fib(index).get_str() << "\n";
    } else if (*c_zeck) {
      BigInt n = parse_big(big_arg, "N");
      ZeckRep z = zeckendorf(n);
      out << n.get_str() << " =";
      bool first = true;
      for (int s : z.indices()) {
        out << (first ? " " : " + ") << "F_" << s;
        first = false;
      }
      if (first) out << " 0";
      out << "\nlength = " << z.length << "\nm = " << z.m << "\n";
    } else if (*c_p) {
      ProductResult r = sudler_product(count, ctx);
      out << "k = " << count << "\n";
      print_product(out, "P", r);
    } else if (*c_q) {
      int n = level_arg(1);
      ProductResult r = fibonacci_product(n, ctx);
      out << "n = " << n << ", F_n = " << fib_u64(n) << "\n";
      print_product(out, "Q", r);
    } else if (*c_dec) {
      int n = level_arg(1);
      Decomposition d = decompose(n, ctx);
      out << "n = " << n << ", F_n = " << fib_u64(n) << "\n";
      print_product(out, "A", d.a);
      print_product(out, "B", d.b);
      print_product(out, "C", d.c);
      print_product(out, "Q", d.q);
      out << "Q - ABC = " << num(d.residual) << "\n";
      out << "|Q - ABC|/Q = " << num(d.relative_residual) << "\n";
      out << "log Q - log ABC = " << num(d.log_residual) << "  (err " << errnum(d.err) << ")\n";
    } else if (*c_lim) {
      LimitProduct u = limit_square_correction(count, ctx);
      out << "T = " << count << "\n";
      out << "U_T = " << num(dd::exp(u.log_value)) << "  (err of log " << errnum(u.err) << ")\n";
      out << "U_T^2 = " << num(u.squared) << "\n";
      out << "min partial = " << num(u.min_partial) << ", max partial = " << num(u.max_partial) << "\n";
      out << "1/u_1^2 = " << num(u.first_inverse_square) << "\n";
      out << "decreasing = " << (u.decreasing ? "yes" : "no") << "\n";
      double plain = std::abs(u.value - 0.928), sq = std::abs(u.squared - 0.928);
      out << "closer to 0.928: " << (plain < sq ? "U_T" : "U_T^2") << " (|U_T - 0.928| = " << num(plain)
          << ", |U_T^2 - 0.928| = " << num(sq) << ")\n";
    } else if (*c_cot) {
      int n = level_arg(2);
      CotSum c = cotangent_sum(n, ctx);
      out << "n = " << n << ", F_n = " << fib_u64(n) << "\n";
      out << "sum cot = " << num(c.sum) << "  (err " << errnum(c.err) << ")\n";
      out << "omega^n sum = " << num(c.normalized) << "\n";
      out << "enclosure = (" << num(c.lower) << ", " << num(c.upper) << "), within = " << (c.within ? "yes" : "no")
          << "\n";
      out << "min ||r omega|| = " << num(c.min_distance) << "\n";
      if (n >= 4) {
        CotSquareSum s = cotangent_square_sum(n, ctx);
        out << "sum cot^2 = " << num(s.sum) << "  (err " << errnum(s.err) << ")\n";
        out << "bound F_n^2/6 + (1+omega^2)/(pi^2 omega^2n) = " << num(s.closed_bound)
            << (s.sum.hi + s.err <= s.closed_bound ? "  holds" : "  violated") << "\n";
        out << "bound F_n^2/3 + (1+omega^2)/(pi^2 omega^2n) = " << num(s.corrected_bound)
            << (s.sum.hi + s.err <= s.corrected_bound ? "  holds" : "  violated") << "\n";
      }
    } else if (*c_cotp) {
      csv::write_cot_profile(out, cot_profile(level_arg(3), ctx));
    } else if (*c_prof) {
      csv::write_profile(out, profile(level_arg(1), stride, ctx));
    } else if (*c_scan) {
      std::vector<PowerLawRow> rows;
      PowerLawReport r = power_law_scan(count, ctx, &rows);
      csv::write_power_law(out, rows);
      err << "K1 = " << num(r.k1) << " at k = " << r.argmin << ", K2 = " << num(r.k2) << " at k = " << r.argmax
          << "\n";
    } else if (*c_pert) {
      int n = level_arg(1);
      Shift a = parse_shift(alpha_arg, ctx);
      out << "n = " << n << ", alpha = " << num(a.value) << "\n";
      if (n == 1) {
        // Outside the bounded regime; the direct product may vanish.
        ProductResult r = shifted_product_raw(n, a, ctx);
        out << "product = " << num(r.value) << (r.value == 0.0 ? "  (a factor vanishes)" : "") << "\n";
        out << "note: the bound C1 <= product needs n >= 2\n";
      } else {
        ShiftedProduct p = shifted_product(n, a, ctx);
        out << "product = " << num(dd::exp(p.log_direct)) << "\n";
        out << "log product = " << num(p.log_direct) << "  (err " << errnum(p.err) << ")\n";
        out << "log factored = " << num(p.log_factored) << "\n";
        out << "product / Q_n = " << num(p.ratio) << "  (upper bound " << num(shifted_ratio_upper_bound()) << ")\n";
        out << "factored form agrees = " << (p.agree ? "yes" : "no") << "\n";
        if (!p.agree) return kVerifyFailed;
      }
    } else if (*c_ident) {
      if (index < 2) throw DomainError("NMAX must be at least 2");
      IdentityReport r = identity_suite(static_cast<int>(index), cfg.seed, 20, cfg.workers);
      for (const auto& x : r.results) {
        char line[200];
        std::snprintf(line, sizeof line, "%-4s %-46s checks %-7llu max rel dev %.3g (n = %d)\n",
                      x.max_rel_dev < r.tolerance ? "PASS" : "FAIL", x.name.c_str(),
                      static_cast<unsigned long long>(x.checks), x.max_rel_dev, x.worst_n);
        out << line;
      }
      out << (r.passed() ? "all identities hold" : "identity violated") << " to " << errnum(r.tolerance)
          << " relative\n";
      if (!r.passed()) return kVerifyFailed;
    } else if (*c_ver) {
      VerifyReport r = run_verify(parse_level(level), ctx, cfg.seed,
                                  [&](const CheckRow& row) { out << format_row(row) << "\n" << std::flush; });
      out << r.count(CheckStatus::Pass) << " passed, " << r.count(CheckStatus::Fail) << " failed, "
          << r.count(CheckStatus::Deviates) << " known deviations, " << r.count(CheckStatus::Info)
          << " informational\n";
      if (!r.passed()) {
        for (const auto& row : r.rows)
          if (row.status == CheckStatus::Fail) err << "violated: " << row.anchor << " (" << row.name << ")\n";
        return kVerifyFailed;
      }
    }
  } catch (const PrecisionError& e) {
    err << "precision exhausted: " << e.what() << "\n";
    return kPrecision;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kVerifyFailed;
  }
  out.flush();
  return kOk;
}

}  // namespace sudler::cli
