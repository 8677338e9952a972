#pragma once

// The golden rotation omega = (sqrt5 - 1)/2 in P-bit fixed point, fractional
// parts {r*omega}, and the auxiliary sequences of the renormalisation
// argument: the rational sine s(n,t), the offsets xi(n,t) and xi(inf,t), and
// the cotangent perturbation h(n,t).

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <vector>

#include "sudler/double_double.hpp"
#include "sudler/fibcore.hpp"

namespace sudler {

inline constexpr int kDefaultPrecisionBits = 192;
inline constexpr int kMinPrecisionBits = 64;

// 192, or SUDLER_PRECISION_BITS when set. Throws PrecisionError on a value
// below 64 and DomainError when it does not parse.
int default_precision_bits();

// A value with a rigorous absolute error bound.
struct Approx {
  DoubleDouble value;
  double err = 0.0;
};

// Fraction mantissa / 2^bits in [0, 1) with absolute error err_ulps / 2^bits.
struct FixedFrac {
  BigInt mantissa;
  int bits = 0;
  std::uint64_t err_ulps = 0;

  DoubleDouble to_dd() const;
  double value() const { return to_dd().hi; }
  double err() const;
};

// Nearest double-double to m / 2^bits for m >= 0 (top 128 bits are used, so
// tiny values keep full relative accuracy).
DoubleDouble fixed_to_dd(const BigInt& m, int bits);
DoubleDouble fixed_to_dd(mpz_srcptr m, int bits);

// Immutable after construction; safe to share between threads.
class GoldenCtx {
 public:
  explicit GoldenCtx(int precision_bits = default_precision_bits(), int n_max = 64,
                     int workers = 1);

  int precision() const { return bits_; }
  int n_max() const { return n_max_; }
  int workers() const { return workers_; }
  void set_workers(int w) { workers_ = w < 1 ? 1 : w; }

  const FixedFrac& omega() const { return omega_; }
  DoubleDouble omega_dd() const { return omega_dd_; }

  // omega^n for n >= 1, cached up to n_max; error at most 2 ulps.
  FixedFrac omega_power(int n) const;
  DoubleDouble omega_power_dd(int n) const;

  // {r*omega}, error (r+1) ulps. PrecisionError once that reaches 2^-16.
  FixedFrac frac_r_omega(const BigInt& r) const;
  FixedFrac frac_r_omega(std::uint64_t r) const;

  // {phase + r*omega} with the phase error carried along.
  FixedFrac frac_shifted(std::uint64_t r, const FixedFrac& phase) const;

  // Fixed-point image of a rational (reduced mod 1) or of omega^k with sign,
  // used for phases and shifts.
  FixedFrac phase_from_rational(const mpq_class& q) const;
  FixedFrac phase_from_signed_power(int k, bool negative) const;

  // Guard against precision exhaustion for an error of `ulps` ulps.
  void check_budget(std::uint64_t ulps) const;

 private:
  FixedFrac power_uncached(int n) const;

  int bits_;
  int n_max_;
  int workers_;
  BigInt omega_ext_;  // omega with 64 guard bits
  FixedFrac omega_;
  DoubleDouble omega_dd_;
  std::vector<FixedFrac> powers_;  // powers_[n] = omega^n, n >= 1
};

// Walks x_r = {phase + r*omega} over consecutive r with exact integer steps.
class RotationWalker {
 public:
  RotationWalker(const GoldenCtx& ctx, std::uint64_t r0, const FixedFrac* phase = nullptr);

  void advance();
  std::uint64_t r() const { return r_; }
  const BigInt& mantissa() const { return cur_; }

  DoubleDouble value() const;
  // Distance y in [0, 1/2] from x_r to the nearest integer; `upper` is set
  // when x_r > 1/2 (so sin(pi x_r) = sin(pi y) and cot(pi x_r) = -cot(pi y)).
  DoubleDouble distance(bool& upper) const;
  // Absolute error of x_r.
  double err() const;
  std::uint64_t err_ulps() const { return r_ + 1 + phase_err_; }

 private:
  const GoldenCtx& ctx_;
  std::uint64_t r_;
  std::uint64_t phase_err_;
  BigInt one_;
  BigInt half_;
  BigInt cur_;
  mutable BigInt tmp_;
};

// {t*omega} - 1/2, with -1/2 at t = 0.
Approx rotation_offset(std::uint64_t t, const GoldenCtx& ctx);

// [t*F_{n-1} mod F_n]/F_n - 1/2 exactly, and 0 when t = 0 mod F_n.
mpq_class rational_offset(int n, long long t);

// 2 sin pi(t/F_n - omega^n * ([t F_{n-1}]/F_n - 1/2)). At t = 0 the offset is
// -1/2 (not 0), giving 2 sin(pi omega^n / 2).
Approx rational_sine(int n, long long t, const GoldenCtx& ctx);

// The same argument reduced to y in [0, 1/2] with the sign of the sine, for
// log-domain accumulation. err is the absolute error of y.
struct ReducedSine {
  DoubleDouble y;
  bool negative = false;
  double err = 0.0;
};
ReducedSine rational_sine_reduced(int n, long long t, const GoldenCtx& ctx);

// Fixed-level evaluator for the rational sine and h(n,t), used by the
// product loops. The index is reduced exactly mod F_n and the residue
// [t F_{n-1}] is exact; only the small omega^n correction is rounded, so y
// keeps about 2^-104 absolute accuracy.
class RationalSineKernel {
 public:
  RationalSineKernel(int n, const GoldenCtx& ctx);

  int level() const { return n_; }
  std::uint64_t modulus() const { return f_; }

  ReducedSine reduced(long long t) const;
  Approx value(long long t) const;
  // h(n,t); DomainError when t = 0 mod F_n.
  Approx cot_perturbation(long long t) const;
  // 2 sin(pi t/F_n) for 1 <= t <= F_n - 1, as a reduced argument.
  DoubleDouble unperturbed_distance(long long t) const;

 private:
  std::uint64_t reduce(long long t, bool& flip) const;
  std::uint64_t residue(std::uint64_t t) const;

  int n_;
  std::uint64_t f_;
  std::uint64_t g_;
  DoubleDouble f_dd_;
  DoubleDouble wn_;  // omega^n
};

// cot(pi t/F_n) sin(pi omega^n xi(n,t)); DomainError when t = 0 mod F_n.
Approx cot_perturbation(int n, long long t, const GoldenCtx& ctx);

// Sums and products with real bounds: sum_{r=lower}^{upper} a_r is the
// integral over (lower-1, upper] of a_{ceil(x)}, so fractional endpoints give
// the boundary term a fractional weight and integer bounds reduce to the
// ordinary sum. The product is exp of the same integral of log a.
using Series = std::function<DoubleDouble(long long)>;

DoubleDouble gen_sum(const Series& a, double lower, double upper, int workers = 1);
DoubleDouble gen_prod(const Series& a, double lower, double upper, int workers = 1);
// log of gen_prod; DomainError on a non-positive term.
DoubleDouble gen_log_prod(const Series& a, double lower, double upper, int workers = 1);

}  // namespace sudler
