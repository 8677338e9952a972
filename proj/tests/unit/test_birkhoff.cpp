#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "sudler/birkhoff.hpp"
#include "sudler/errors.hpp"

using namespace sudler;
using oracle::Real;

TEST_CASE("centred sine sums against MPFR") {
  GoldenCtx ctx(192);
  const Real p = oracle::pi(), w = oracle::omega();
  mpq_class third(1, 3);
  FixedFrac theta = ctx.phase_from_rational(third);
  Real th = Real(1) / 3;
  for (int n : {8, 12}) {
    Real wn = pow(w, n), acc = 0;
    std::uint64_t f = fib_u64(n);
    SumSeries series = centered_sine_series(n, f - 1, theta, ctx);
    SplitSineSums split(n, theta, ctx);
    for (std::uint64_t t = 1; t < f; ++t) {
      acc += sin(p * wn * (oracle::frac(th + Real(t) * w) - Real(0.5)));
      REQUIRE(abs(oracle::from_dd(series.values[t - 1]) - acc) <= series.errs[t - 1] + 1e-30);
      CHECK(std::abs((split.evaluate(t).value - series.values[t - 1]).hi) < 1e-25);
    }
    CHECK(abs(oracle::from_dd(centered_sine_sum(n, f - 1, theta, ctx).value) - acc) < 1e-25);
    CHECK(split.cached_segments() > 0);
  }
}

TEST_CASE("discrepancy sums are exact in the phase") {
  GoldenCtx ctx(192);
  Phase alpha = phase_from_fixed(ctx.omega());
  const Real w = oracle::omega();
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    double th = std::uniform_real_distribution<double>(0, 1)(rng);
    Phase theta = phase_from_double(th);
    Real acc = 0;
    for (int k = 1; k <= 987; ++k) acc += oracle::frac(Real(th) + Real(k) * w) - Real(0.5);
    CHECK(abs(oracle::from_dd(discrepancy_sum(987, alpha, theta)) - acc) < 1e-12);
  }
  CHECK(phase_from_double(1.25) == phase_from_double(0.25));
}

TEST_CASE("cotangent sums against MPFR") {
  GoldenCtx ctx(192);
  const Real p = oracle::pi(), w = oracle::omega();
  for (int n : {2, 5, 9, 14}) {
    Real s = 0, s2 = 0;
    std::uint64_t f = fib_u64(n);
    for (std::uint64_t r = 1; r <= f; ++r) {
      Real c = cos(p * Real(r) * w) / sin(p * Real(r) * w);
      s += c;
      s2 += c * c;
    }
    CotSum c = cotangent_sum(n, ctx);
    CHECK(abs(oracle::from_dd(c.sum) - s) <= c.err + 1e-28);
    CHECK(c.within);
    CHECK((n % 2 == 1 ? c.normalized.hi < 0 : c.normalized.hi > 0) == (n % 2 == 1 ? s < 0 : s > 0));
    if (n >= 4) {
      CotSquareSum q = cotangent_square_sum(n, ctx);
      CHECK(abs(oracle::from_dd(q.sum) - s2) <= q.err + 1e-24);
      CHECK(q.sum.hi < q.rational_bound);
      CHECK(q.rational_bound <= q.inverse_square_bound);
      CHECK(q.sum.hi < q.corrected_bound);
    }
    if (n >= 3) {
      // k runs to F_n - 1, so the last partial sum drops the r = F_n term.
      std::vector<CotProfileRow> prof = cot_profile(n, ctx);
      REQUIRE(prof.size() == f - 1);
      Real last = cos(p * Real(f) * w) / sin(p * Real(f) * w);
      CHECK(prof.back().partial == doctest::Approx(static_cast<double>((n % 2 ? -1 : 1) * (s - last))).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(cotangent_sum(1, ctx), DomainError);
  CHECK_THROWS_AS(cotangent_square_sum(3, ctx), DomainError);
}

TEST_CASE("Birkhoff sums") {
  GoldenCtx ctx(192);
  for (std::uint64_t k : {1ull, 55ull, 1000ull})
    CHECK(abs(oracle::from_dd(birkhoff_sum(k, ctx).value) - 2 * oracle::log_sudler(k)) < 1e-25);
}

TEST_CASE("Lagrange sums") {
  for (auto [theta, x, n] : {std::tuple{0.3, 0.7, 10}, {1.0, 2.0, 200}, {-2.0, 0.001, 50}}) {
    LagrangeSum a = lagrange_sine_sum(theta, x, n);
    LagrangeSum b = lagrange_weighted_sine_sum(theta, x, n);
    Real ra = 0, rb = 0;
    for (int k = 1; k <= n; ++k) {
      ra += sin(Real(theta) + k * Real(x));
      rb += k * sin(Real(theta) + k * Real(x));
    }
    CHECK(static_cast<double>(abs(oracle::from_dd(a.closed) - ra)) < 1e-20 * n);
    CHECK(static_cast<double>(abs(oracle::from_dd(a.direct) - ra)) < 1e-20 * n);
    CHECK(static_cast<double>(abs(oracle::from_dd(b.closed) - rb)) < 1e-17 * n * n);
  }
  CHECK_THROWS_AS(lagrange_sine_sum(0.1, 0.0, 5), DomainError);
  CHECK_THROWS_AS(lagrange_weighted_sine_sum(0.1, 4 * M_PI, 5), DomainError);
}

TEST_CASE("identity suite") {
  IdentityReport one = identity_suite(40, 11, 10, 1);
  IdentityReport many = identity_suite(40, 11, 10, 4);
  CHECK(one.passed());
  REQUIRE(one.results.size() == many.results.size());
  for (std::size_t i = 0; i < one.results.size(); ++i) {
    CHECK(one.results[i].checks > 0);
    CHECK(one.results[i].max_rel_dev == many.results[i].max_rel_dev);
  }
}
