#pragma once

// Reference values in about 330-bit MPFR arithmetic, independent of the
// double-double and fixed-point paths under test.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>

#include "sudler/double_double.hpp"

namespace oracle {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<100>>;

inline Real pi() { return boost::math::constants::pi<Real>(); }

inline Real omega() { return (sqrt(Real(5)) - 1) / 2; }

inline Real frac(const Real& x) { return x - floor(x); }

// sum_{r=1}^{k} log|2 sin(pi (r omega + shift))|
inline Real log_sudler(std::uint64_t k, const Real& shift = Real(0)) {
  Real w = omega(), p = pi(), acc = 0;
  for (std::uint64_t r = 1; r <= k; ++r) acc += log(abs(2 * sin(p * frac(Real(r) * w + shift))));
  return acc;
}

inline Real from_dd(const sudler::DoubleDouble& x) { return Real(x.hi) + Real(x.lo); }

inline double rel(double got, const Real& want) { return static_cast<double>(abs((Real(got) - want) / want)); }

// |got - want| / |want| for a double-double result.
inline double rel(const sudler::DoubleDouble& got, const Real& want) {
  return static_cast<double>(abs((from_dd(got) - want) / want));
}

}  // namespace oracle
