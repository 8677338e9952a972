#include <doctest.h>

#include "oracle.hpp"
#include "sudler/errors.hpp"
#include "sudler/product.hpp"

using namespace sudler;
using oracle::Real;

namespace {

// s(n,t) = 2 sin pi(t/F_n - omega^n xi(n,t)), xi(n,0) = -1/2.
Real rational_sine_ref(int n, long long t) {
  long long f = static_cast<long long>(fib_u64(n)), g = static_cast<long long>(fib_u64(n - 1));
  Real xi = t % f == 0 ? Real(-0.5) : Real((t * g) % f) / f - Real(0.5);
  return 2 * sin(oracle::pi() * (Real(t) / f - pow(oracle::omega(), n) * xi));
}

}  // namespace

TEST_CASE("P_k against MPFR") {
  GoldenCtx ctx(192);
  for (std::uint64_t k : {1ull, 2ull, 3ull, 10ull, 144ull, 1000ull, 4181ull}) {
    ProductResult r = sudler_product(k, ctx);
    Real want = oracle::log_sudler(k);
    CHECK(abs(oracle::from_dd(r.log_value) - want) < 1e-26);
    CHECK(r.err < 1e-20);
    CHECK(oracle::rel(r.value, exp(want)) < 1e-15);
  }
  CHECK(sudler_product(0, ctx).value == 1.0);
}

TEST_CASE("results do not depend on precision or workers") {
  GoldenCtx a(128, 64, 1), b(256, 64, 8);
  for (std::uint64_t k : {1000ull, 50000ull}) {
    ProductResult x = sudler_product(k, a), y = sudler_product(k, b);
    CHECK(std::abs((x.log_value - y.log_value).hi) < x.err + y.err + 1e-28);
  }
}

TEST_CASE("decomposition factors against MPFR") {
  GoldenCtx ctx(192);
  const Real p = oracle::pi(), w = oracle::omega();
  for (int n : {3, 6, 9, 12, 14}) {
    long long f = static_cast<long long>(fib_u64(n));
    Real a = 2 * Real(f) * sin(p * pow(w, n));
    Real b = 1;
    for (long long t = 1; t < f; ++t) b *= rational_sine_ref(n, t) / (2 * sin(p * t / f));
    Real s0 = rational_sine_ref(n, 0), c = 1;
    for (long long t = 1; 2 * t <= f - 1; ++t) c *= 1 - s0 * s0 / pow(rational_sine_ref(n, t), 2);
    if (f % 2 == 0) c *= sqrt(1 - s0 * s0 / pow(rational_sine_ref(n, f / 2), 2));
    Real q = exp(oracle::log_sudler(static_cast<std::uint64_t>(f)));

    Decomposition d = decompose(n, ctx);
    CHECK(oracle::rel(d.a.value, a) < 1e-14);
    CHECK(oracle::rel(d.b.value, b) < 1e-14);
    CHECK(oracle::rel(d.c.value, c) < 1e-14);
    CHECK(oracle::rel(d.q.value, q) < 1e-14);
    CHECK(static_cast<double>(abs(q - a * b * c) / q) < 1e-28);
    CHECK(d.relative_residual < 1e-25);
  }
}

TEST_CASE("factor asymptotics") {
  GoldenCtx ctx(192);
  const double two_pi_over_sqrt5 = 2 * M_PI / std::sqrt(5.0);
  double w = (std::sqrt(5.0) - 1) / 2;
  for (int n = 5; n <= 30; ++n) {
    double err = std::abs(boundary_factor(n, ctx).value - two_pi_over_sqrt5);
    CHECK(err < 10 * std::pow(w, 2 * n));
  }
  for (int n = 10; n <= 22; n += 3) {
    double diff = std::abs((perturbation_factor(n, ctx).log_value - perturbation_factor_star(n, ctx).log_value).hi);
    CHECK(diff < 10 * std::pow(w, n));
    double half = std::abs((square_correction_factor(n, ctx).log_value -
                            square_correction_factor_upper_half(n, ctx).log_value).hi);
    CHECK(half > 0);
    CHECK(half < 10 * std::pow(w, 2 * n));
  }
  CHECK_THROWS_AS(boundary_factor(0, ctx), DomainError);
}

TEST_CASE("limit of the square correction") {
  GoldenCtx ctx(192);
  const Real w = oracle::omega(), s5 = sqrt(Real(5));
  Real u = 1;
  for (int t = 1; t <= 1000; ++t) {
    Real ut = 2 * s5 * (t - (oracle::frac(t * w) - Real(0.5)) / s5);
    u *= 1 - 1 / (ut * ut);
  }
  LimitProduct l = limit_square_correction(1000, ctx);
  CHECK(oracle::rel(l.value, u) < 1e-14);
  CHECK(l.decreasing);
  CHECK(l.min_partial == doctest::Approx(l.value).epsilon(1e-15));
  CHECK(std::abs(l.squared - l.value * l.value) < 1e-15);
}

TEST_CASE("predecessor ratio and profile") {
  GoldenCtx ctx(192);
  for (int n = 2; n <= 20; ++n) {
    ProductResult r = predecessor_ratio(n, ctx);
    double lhs = r.log_value.hi + boundary_factor(n, ctx).log_value.hi;
    CHECK(lhs == doctest::Approx(fibonacci_product(n, ctx).log_value.hi).epsilon(1e-13));
  }
  std::vector<ProfileRow> rows = profile(12, 1, ctx);
  REQUIRE(rows.size() == fib_u64(12));
  for (std::uint64_t k : {1ull, 17ull, 144ull})
    CHECK(rows[k - 1].log_value == doctest::Approx(sudler_product(k, ctx).log_value.hi).epsilon(1e-14));
  std::vector<ProfileRow> strided = profile(12, 10, ctx);
  CHECK(strided.front().k == 1);
  CHECK(strided[1].k == 11);
}

TEST_CASE("rational products") {
  for (long long q = 2; q <= 300; ++q) CHECK(rational_sudler_product(1, q, q - 1) == doctest::Approx(q).epsilon(1e-13));
  CHECK(rational_sudler_product(3, 7, 7) == 0.0);
  CHECK(rational_sudler_product(2, 5, 1) == doctest::Approx(2 * std::sin(2 * M_PI / 5)).epsilon(1e-15));
  CHECK_THROWS_AS(rational_sudler_product(2, 4, 1), DomainError);
  CHECK_THROWS_AS(rational_sudler_product(5, 4, 1), DomainError);
}
