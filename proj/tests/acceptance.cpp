// Acceptance suite. Each criterion prints one PASS/FAIL line per check and
// exits non-zero when any check fails.
//
//   acceptance [--criterion N] [--workers W] [--seed S]

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sudler/birkhoff.hpp"
#include "sudler/bounds.hpp"
#include "sudler/cli.hpp"
#include "sudler/fibcore.hpp"
#include "sudler/golden.hpp"
#include "sudler/product.hpp"

using namespace sudler;

namespace {

struct Tally {
  int passed = 0, failed = 0;
};

Tally tally;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void check(int criterion, bool ok, const std::string& what, const std::string& measured) {
  std::printf("%s [%d] %s -- %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str(), measured.c_str());
  std::fflush(stdout);
  (ok ? tally.passed : tally.failed)++;
}

void info(int criterion, const std::string& what) { std::printf("INFO [%d] %s\n", criterion, what.c_str()); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Env {
  const GoldenCtx& ctx;
  std::uint64_t seed;
  int workers;
};

// 1. prod_{r<q} |2 sin(pi r/q)| = q.
void rational_exactness(const Env&) {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  long long worst_q = 0;
  for (long long q = 2; q <= 2000; ++q) {
    double rel = std::abs(rational_sudler_product(1, q, q - 1) / static_cast<double>(q) - 1.0);
    if (rel > worst || worst_q == 0) worst = rel, worst_q = q;
  }
  double secs = seconds_since(t0);
  check(1, worst < 1e-12, "P_{q-1}(1/q) = q within 1e-12 relative, 2 <= q <= 2000",
        fmt("max rel dev %.3g at q = %lld", worst, worst_q));
  check(1, secs < 10, "runtime < 10 s", fmt("%.2f s", secs));
}

// 2. Q_n = A_n B_n C_n.
void decomposition(const Env& env) {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  int worst_n = 0;
  for (int n = 1; n <= 30; ++n) {
    Decomposition d = decompose(n, env.ctx);
    if (d.relative_residual > worst || worst_n == 0) worst = d.relative_residual, worst_n = n;
  }
  double secs = seconds_since(t0);
  check(2, worst < 1e-9, "|Q_n - A_n B_n C_n|/Q_n < 1e-9, 1 <= n <= 30",
        fmt("max %.3g at n = %d", worst, worst_n));
  check(2, secs < 60, "runtime < 60 s", fmt("%.2f s", secs));
}

// 3. Q_n settles near 2.407.
void subsequence(const Env& env) {
  std::vector<double> q;
  for (int n = 20; n <= 30; ++n) q.push_back(fibonacci_product(n, env.ctx).value);
  auto [lo, hi] = std::minmax_element(q.begin(), q.end());
  check(3, *lo > 2.35 && *hi < 2.46, "Q_n in (2.35, 2.46) for 20 <= n <= 30", fmt("range [%.10f, %.10f]", *lo, *hi));

  std::vector<double> d;
  for (std::size_t i = 0; i + 1 < q.size(); ++i) d.push_back(std::abs(q[i + 1] - q[i]));
  std::size_t half = d.size() / 2;
  double early = 0, late = 0;
  for (std::size_t i = 0; i < half; ++i) early += d[i];
  for (std::size_t i = d.size() - half; i < d.size(); ++i) late += d[i];
  early /= static_cast<double>(half);
  late /= static_cast<double>(half);
  std::string diffs;
  for (double x : d) diffs += fmt(" %.2e", x);
  info(3, "successive |Q_{n+1} - Q_n|, n = 20..29:" + diffs);
  check(3, late < early, "successive differences decrease on average",
        fmt("mean of first %zu = %.3g, mean of last %zu = %.3g", half, early, half, late));
  check(3, std::abs(q.back() - 2.407) < 0.05, "limit estimate (Q_30) within 0.05 of 2.407",
        fmt("Q_30 = %.12f, |Q_30 - 2.407| = %.3g", q.back(), std::abs(q.back() - 2.407)));
}

// 4. The limit of the square-correction factor.
void c_limit(const Env& env) {
  LimitProduct u = limit_square_correction(1000000, env.ctx);
  check(4, u.min_partial > 0.862, "every partial product of U_T (T = 10^6) exceeds 0.862",
        fmt("min partial %.12f", u.min_partial));
  check(4, u.max_partial < 1.0, "every partial product of U_T is < 1", fmt("max partial %.12f", u.max_partial));
  ProductResult c20 = square_correction_factor(20, env.ctx);
  check(4, std::abs(c20.value - u.value) < 1e-2, "C_20 agrees with U_{10^6} within 1e-2",
        fmt("C_20 = %.12f, U = %.12f, diff %.3g", c20.value, u.value, std::abs(c20.value - u.value)));
  double plain = std::abs(u.value - 0.928), sq = std::abs(u.squared - 0.928);
  info(4, fmt("U = %.10f (|U - 0.928| = %.4f), U^2 = %.10f (|U^2 - 0.928| = %.4f); matching form: %s", u.value,
              plain, u.squared, sq, plain < sq ? "unsquared" : "squared"));
}

// 5. Accumulation points of S_k / ln k at k = F_28 and F_28 - 1.
void accumulation(const Env& env) {
  const int n = 28;
  std::uint64_t f = fib_u64(n);
  double lnf = std::log(static_cast<double>(f));
  ProductResult at = fibonacci_product(n, env.ctx);
  ProductResult before = sudler_product(f - 1, env.ctx);
  double r0 = 2.0 * at.log_value.hi / lnf;
  double r2 = 2.0 * before.log_value.hi / lnf;
  check(5, std::abs(r0) < 0.1, "S_{F_28}/ln F_28 within 0.1 of 0", fmt("%.6f", r0));
  check(5, std::abs(r2 - 2.0) < 0.1, "S_{F_28 - 1}/ln F_28 within 0.1 of 2", fmt("%.6f", r2));
}

// 6. Cotangent sums.
void cotangent(const Env& env) {
  bool odd_ok = true, even_ok = true;
  std::string odd_bad, even_bad;
  for (int n = 2; n <= 25; ++n) {
    CotSum c = cotangent_sum(n, env.ctx);
    bool ok = c.within;
    if (n % 2 == 1 && n >= 3) {
      odd_ok = odd_ok && ok;
      if (!ok) odd_bad += fmt(" %d", n);
    } else if (n % 2 == 0 && n <= 24) {
      even_ok = even_ok && ok;
      if (!ok) even_bad += fmt(" %d", n);
    }
  }
  check(6, odd_ok, "omega^n sum cot(pi r omega) in (-E_n, 1/pi), odd 3 <= n <= 25",
        odd_ok ? "all inside" : "outside at n =" + odd_bad);
  check(6, even_ok, "omega^n sum cot(pi r omega) in (-1/pi, E_n), even 2 <= n <= 24",
        even_ok ? "all inside" : "outside at n =" + even_bad);

  std::string bad;
  double worst = 0;
  int worst_n = 0;
  for (int n = 4; n <= 18; ++n) {
    CotSquareSum s = cotangent_square_sum(n, env.ctx);
    double r = s.sum.hi / s.closed_bound;
    if (r > worst) worst = r, worst_n = n;
    if (s.sum.hi + s.err >= s.closed_bound) bad += fmt(" %d", n);
  }
  check(6, bad.empty(), "sum cot^2 < F_n^2/6 + (1+omega^2)/(pi^2 omega^2n), 4 <= n <= 18",
        fmt("max sum/bound = %.4f at n = %d", worst, worst_n) + (bad.empty() ? "" : "; violated at n =" + bad));
}

// 7. Three-halves discrepancy at Fibonacci q.
void discrepancy(const Env& env) {
  Phase alpha = phase_from_fixed(env.ctx.omega());
  std::mt19937_64 rng(env.seed ^ 0x7);
  double worst = 0;
  int worst_n = 0;
  std::uint64_t checks = 0;
  for (int n = 2; n <= 25; ++n) {
    std::uint64_t q = fib_u64(n);
    for (int i = 0; i < 1000; ++i) {
      Phase theta = (static_cast<Phase>(rng()) << 64) | rng();
      double v = std::abs(discrepancy_sum(q, alpha, theta).hi);
      ++checks;
      if (v > worst) worst = v, worst_n = n;
    }
  }
  check(7, worst < 1.5, "|sum_{i<=q} ({theta + i omega} - 1/2)| < 3/2, q = F_2..F_25, 1000 theta each",
        fmt("%llu sums, max %.6f at q = F_%d", static_cast<unsigned long long>(checks), worst, worst_n));
}

// 8. Partial sums of the centred sine.
void partial_sums(const Env& env) {
  const double k = partial_sum_constant();
  FixedFrac zero = env.ctx.phase_from_rational(mpq_class(0));
  double worst = 0, worst_split = 0;
  int worst_n = 0;
  for (int n = 8; n <= 18; ++n) {
    std::uint64_t f = fib_u64(n);
    double wn = env.ctx.omega_power_dd(n).hi;
    SumSeries series = centered_sine_series(n, f - 1, zero, env.ctx);
    SplitSineSums split(n, zero, env.ctx);
    for (std::uint64_t t = 1; t < f; ++t) {
      double r = (std::abs(series.values[t - 1].hi) + series.errs[t - 1]) /
                 (wn * (std::log(static_cast<double>(t)) + 1.0));
      if (r > worst) worst = r, worst_n = n;
      worst_split = std::max(worst_split, std::abs((split.evaluate(t).value - series.values[t - 1]).hi));
    }
  }
  check(8, worst < k, "|S(n,t)| < K omega^n (ln t + 1), 8 <= n <= 18, t < F_n",
        fmt("max |S|/(omega^n (ln t + 1)) = %.4f at n = %d, K = %.4f", worst, worst_n, k));
  check(8, worst_split < 1e-12, "direct and Zeckendorf-split S(n,t) agree to 1e-12",
        fmt("max |diff| = %.3g", worst_split));
}

// 9. Power-law envelope and the split of P_k.
void power_law(const Env& env) {
  PowerLawReport r = power_law_scan(fib_u64(20), env.ctx);
  check(9, r.k1 <= 0, "K1_emp <= 0 over 2 <= k <= F_20",
        fmt("K1_emp = %.6f at k = %llu", r.k1, static_cast<unsigned long long>(r.argmin)));
  check(9, r.k2 >= 1, "K2_emp >= 1 over 2 <= k <= F_20",
        fmt("K2_emp = %.6f at k = %llu", r.k2, static_cast<unsigned long long>(r.argmax)));

  std::vector<ProfileRow> direct = profile(21, 1, env.ctx);  // F_21 = 10946 >= 10^4
  SplitProducts split(env.ctx);
  double worst = 0;
  std::uint64_t worst_k = 0;
  for (const ProfileRow& row : direct) {
    if (row.k > 10000) break;
    SplitProduct s = split.evaluate(row.k);
    double rel = std::abs(std::expm1(s.log_split.hi - row.log_value));
    if (rel > worst || worst_k == 0) worst = rel, worst_k = row.k;
  }
  check(9, worst < 1e-10, "split product equals direct P_k to 1e-10, k <= 10^4",
        fmt("max rel diff %.3g at k = %llu (%zu cached segments)", worst, static_cast<unsigned long long>(worst_k),
            split.cached_segments()));
}

// 10. Trigonometric identities.
void identities(const Env& env) {
  IdentityReport r = identity_suite(200, env.seed, 20, env.workers);
  for (const IdentityResult& x : r.results)
    check(10, x.max_rel_dev < r.tolerance, x.name + ", n <= 200",
          fmt("%llu checks, max rel dev %.3g at n = %d", static_cast<unsigned long long>(x.checks), x.max_rel_dev,
              x.worst_n));
}

// 11. Inequality toolkit.
void inequalities(const Env& env) {
  ConvexSineReport c = convex_sine_check(100000, env.seed);
  check(11, c.passed(), "2x/pi < sin x < x on (0, pi/2)",
        fmt("%llu points, %llu violations, min margins %.3g / %.3g", static_cast<unsigned long long>(c.checks),
            static_cast<unsigned long long>(c.violations), c.min_lower_margin, c.min_upper_margin));
  ProdBoundsScan p = prod_bounds_scan(20000, env.seed);
  check(11, p.passed(), "1 - A < prod (1 + a_t) < 1/(1 - A)",
        fmt("%llu sequences, %llu strict checks, %llu violations", static_cast<unsigned long long>(p.sequences),
            static_cast<unsigned long long>(p.strict_checks), static_cast<unsigned long long>(p.violations)));
  LogLowerReport l = log_lower_check(100000);
  check(11, l.passed(), "log(1+x) >= x - x^2 for x > -0.683, root bracketed below -0.683",
        fmt("%llu grid points, %llu violations, root in (%.9f, %.9f)", static_cast<unsigned long long>(l.grid_points),
            static_cast<unsigned long long>(l.violations), l.root_lo, l.root_hi));
}

// 12. CSV output does not depend on the worker count.
void reproducibility(const Env& env) {
  const std::vector<std::vector<std::string>> commands = {
      {"profile", "25"}, {"cotprofile", "25"}, {"scan", std::to_string(fib_u64(25))}};
  for (const auto& cmd : commands) {
    std::map<int, std::string> outputs;
    for (int w : {1, 4, 8}) {
      std::vector<std::string> args = {"sudler", "--workers", std::to_string(w), "--seed", std::to_string(env.seed),
                                       "--precision", std::to_string(env.ctx.precision())};
      args.insert(args.end(), cmd.begin(), cmd.end());
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      std::ostringstream out, err;
      int rc = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
      outputs[w] = rc == 0 ? out.str() : "exit " + std::to_string(rc) + ": " + err.str();
    }
    bool same = outputs[1] == outputs[4] && outputs[1] == outputs[8] && !outputs[1].empty();
    check(12, same, "`" + cmd[0] + " " + cmd[1] + "` byte-identical for 1, 4, 8 workers",
          fmt("%zu / %zu / %zu bytes", outputs[1].size(), outputs[4].size(), outputs[8].size()));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0, workers = 4;
  std::uint64_t seed = 20110101;
  app.add_option("--criterion", only, "run a single criterion (1-12)")->check(CLI::Range(1, 12));
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for randomised checks");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<void(const Env&)>>> criteria = {
      {"rational exactness", rational_exactness},
      {"decomposition identity", decomposition},
      {"subsequence convergence", subsequence},
      {"C-limit bounds", c_limit},
      {"accumulation points", accumulation},
      {"cotangent enclosures", cotangent},
      {"three-halves discrepancy", discrepancy},
      {"partial-sum bound", partial_sums},
      {"power-law envelope", power_law},
      {"identity suite", identities},
      {"inequality toolkit", inequalities},
      {"reproducibility", reproducibility},
  };

  GoldenCtx ctx(default_precision_bits(), 64, workers);
  Env env{ctx, seed, workers};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    auto t0 = std::chrono::steady_clock::now();
    std::printf("== criterion %zu: %s\n", i + 1, criteria[i].first);
    try {
      criteria[i].second(env);
    } catch (const std::exception& e) {
      check(static_cast<int>(i) + 1, false, "criterion raised", e.what());
    }
    std::printf("   (%.2f s)\n", seconds_since(t0));
  }
  std::printf("%d passed, %d failed\n", tally.passed, tally.failed);
  return tally.failed == 0 ? 0 : 1;
}
