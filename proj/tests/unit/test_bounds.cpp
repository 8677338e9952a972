#include <doctest.h>

#include "oracle.hpp"
#include "sudler/bounds.hpp"
#include "sudler/errors.hpp"

using namespace sudler;
using oracle::Real;

TEST_CASE("inequality toolkit") {
  CHECK(convex_sine_check(10000, 5).passed());
  CHECK(prod_bounds_scan(2000, 5).passed());

  ProdBoundsResult r = prod_bounds_check({0.1, -0.2, 0.3});
  CHECK(r.holds);
  CHECK(r.strict);
  CHECK(r.total == doctest::Approx(0.6));
  CHECK(r.product.hi == doctest::Approx(1.1 * 0.8 * 1.3));
  CHECK(prod_bounds_check({0.0, 0.0}).skipped);
  CHECK_FALSE(prod_bounds_check({0.5}).strict);
  CHECK_THROWS_AS(prod_bounds_check({0.6, 0.5}), DomainError);
  CHECK_THROWS_AS(prod_bounds_check({1.0}), DomainError);

  LogLowerReport l = log_lower_check(20000);
  CHECK(l.passed());
  CHECK(l.root_lo < -0.683);
  CHECK(l.root_hi - l.root_lo < 1e-6);
  CHECK(l.value_at_zero == 0.0);
  CHECK(l.slope_at_half == doctest::Approx(0.0).epsilon(1e-15));
  // the root of log(1+x) = x - x^2 by MPFR Newton
  Real x = -0.68;
  for (int i = 0; i < 60; ++i) x -= (log1p(x) - x + x * x) / (1 / (1 + x) - 1 + 2 * x);
  CHECK(Real(l.root_lo) <= x);
  CHECK(x <= Real(l.root_hi));
}

TEST_CASE("shifted products against MPFR") {
  GoldenCtx ctx(192);
  const Real w = oracle::omega();
  for (int n : {3, 8, 13}) {
    for (bool neg : {false, true}) {
      Shift a = shift_from_power(n + 1, neg, ctx);
      Real shift = (neg ? -1 : 1) * pow(w, n + 1);
      ShiftedProduct p = shifted_product(n, a, ctx);
      Real want = oracle::log_sudler(fib_u64(n), shift);
      CHECK(abs(oracle::from_dd(p.log_direct) - want) < 1e-24);
      CHECK(p.agree);
      CHECK(std::abs((p.log_direct - p.log_factored).hi) < 1e-24);
      CHECK(p.ratio < shifted_ratio_upper_bound());
    }
    Shift mid = shift_from_scaled_power(n + 1, 0.25, ctx);
    CHECK(mid.value.hi == doctest::Approx(0.25 * std::pow(0.6180339887498949, n + 1)).epsilon(1e-14));
  }
  Shift third = shift_from_rational(mpq_class(1, 3), ctx);
  CHECK_THROWS_AS(shifted_product(5, third, ctx), DomainError);
  CHECK_THROWS_AS(shifted_product(1, shift_from_power(2, false, ctx), ctx), DomainError);
  CHECK(shifted_product_raw(1, shift_from_power(2, false, ctx), ctx).value == 0.0);
  CHECK(shifted_ratio_upper_bound() == doctest::Approx(1.93162).epsilon(1e-5));
}

TEST_CASE("shifted product scan") {
  GoldenCtx ctx(192);
  ShiftScan scan = shifted_product_scan(2, 10, 5, 9, ctx);
  REQUIRE(scan.levels.size() == 9);
  ShiftLevel all = scan.summary();
  CHECK(all.evaluations == 9 * 7);
  CHECK(all.all_agree);
  CHECK(all.min_value > 0.8);
  CHECK(scan.summary(4).max_ratio < shifted_ratio_upper_bound());
}

TEST_CASE("Zeckendorf split of P_k") {
  GoldenCtx ctx(192);
  for (std::uint64_t k : {1ull, 100ull, 4000ull, 10945ull}) {
    SplitCheck c = split_product(k, ctx);
    CHECK(c.rel_diff < 1e-12);
    CHECK(c.split.segments.size() == static_cast<std::size_t>(zeckendorf(k).length));
    for (const SplitSegment& s : c.split.segments) CHECK(s.alpha_within);
  }
  SplitProducts memo(ctx);
  memo.evaluate(1000);
  std::size_t before = memo.cached_segments();
  memo.evaluate(1000);
  CHECK(memo.cached_segments() == before);
}

TEST_CASE("power-law scan") {
  GoldenCtx ctx(192);
  std::vector<PowerLawRow> rows;
  PowerLawReport r = power_law_scan(610, ctx, &rows);
  REQUIRE(rows.size() == 609);
  CHECK(rows.front().k == 2);
  double lo = 1e9, hi = -1e9;
  for (const auto& row : rows) {
    lo = std::min(lo, row.ratio);
    hi = std::max(hi, row.ratio);
  }
  CHECK(r.k1 == lo);
  CHECK(r.k2 == hi);
  CHECK(r.argmax == 2);
  CHECK(rows[r.argmin - 2].ratio == lo);
  CHECK(rows[98].ratio == doctest::Approx(sudler_product(100, ctx).log_value.hi / std::log(100.0)).epsilon(1e-14));
}
