#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "sudler/double_double.hpp"

using namespace sudler;
using oracle::Real;

TEST_CASE("arithmetic keeps about 106 bits") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 1000; ++i) {
    DoubleDouble a = dd_detail::two_sum(u(rng), u(rng) * 1e-17);
    DoubleDouble b = dd_detail::two_sum(u(rng), u(rng) * 1e-17);
    Real ra = oracle::from_dd(a), rb = oracle::from_dd(b);
    CHECK(oracle::rel(a * b, ra * rb) < 1e-31);
    CHECK(oracle::rel(a / b, ra / rb) < 1e-31);
    Real s = ra + rb;
    if (abs(s) > 1e-3) CHECK(oracle::rel(a + b, s) < 1e-29);
  }
}

TEST_CASE("transcendentals against MPFR") {
  const Real pi = oracle::pi();
  for (double x : {1e-12, 1e-6, 0.001, 0.1, 0.25, 0.3333, 0.49, 0.5}) {
    DoubleDouble y(x);
    CHECK(oracle::rel(dd::sin_pi_reduced(y), sin(pi * Real(x))) < 1e-30);
    auto [s, c] = dd::sincos_pi_reduced(y);
    CHECK(oracle::rel(s, sin(pi * Real(x))) < 1e-30);
    if (x < 0.5) CHECK(oracle::rel(c, cos(pi * Real(x))) < 1e-30);
  }
  for (double x : {-30.5, -1.0, 1e-20, 0.7, 1.0, 2.5, 700.0}) {
    DoubleDouble y(x);
    // relative error grows with |x| through the reduction by ln 2
    CHECK(oracle::rel(dd::exp(y), exp(Real(x))) < 1e-32 * std::max(1.0, 4 * std::abs(x)));
  }
  for (double x : {1e-300, 1e-8, 0.5, 1.0 + 1e-15, 2.0, 1e10}) {
    DoubleDouble y(x);
    Real want = log(Real(x));
    if (want != 0) CHECK(oracle::rel(dd::log(y), want) < 1e-30);
  }
  CHECK(oracle::rel(dd::sqrt(DoubleDouble(5.0)), sqrt(Real(5))) < 1e-31);
  CHECK(oracle::rel(dd::pi, pi) < 1e-31);
  Real tenth(0.1);  // the double nearest 0.1
  CHECK(oracle::rel(dd::cot_pi(DoubleDouble(0.1)), cos(pi * tenth) / sin(pi * tenth)) < 1e-30);
  CHECK(oracle::rel(dd::sin_pi(DoubleDouble(1234.3)), sin(pi * Real(1234.3))) < 1e-27);
}

TEST_CASE("integer conversion and rendering") {
  CHECK(oracle::from_dd(dd::from_u64(0xFFFFFFFFFFFFFFFFull)) == Real("18446744073709551615"));
  CHECK(oracle::from_dd(dd::from_i64(-(1ll << 62) - 7)) == -Real(1ll << 62) - 7);
  CHECK(dd::to_string(DoubleDouble(0.5), 5).rfind("0.5", 0) == 0);
  CHECK(dd::to_string(dd::pi, 25).rfind("3.14159265358979323846264", 0) == 0);
}
