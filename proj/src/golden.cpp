#include "sudler/golden.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>

#include "sudler/blocks.hpp"
#include "sudler/errors.hpp"

static_assert(GMP_NUMB_BITS == 64, "64-bit GMP limbs are assumed");

namespace sudler {

int default_precision_bits() {
  const char* env = std::getenv("SUDLER_PRECISION_BITS");
  if (env == nullptr || *env == '\0') return kDefaultPrecisionBits;
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (errno != 0 || end == env || *end != '\0' || v > 1 << 20)
    throw DomainError(std::string("SUDLER_PRECISION_BITS is not a valid bit count: ") + env);
  if (v < kMinPrecisionBits)
    throw PrecisionError("SUDLER_PRECISION_BITS must be at least 64, got " + std::to_string(v));
  return static_cast<int>(v);
}

namespace {

DoubleDouble u128_to_dd(std::uint64_t hi, std::uint64_t lo) {
  return ldexp(dd::from_u64(hi), 64) + dd::from_u64(lo);
}

}  // namespace

DoubleDouble fixed_to_dd(mpz_srcptr m, int bits) {
  if (mpz_sgn(m) == 0) return 0.0;
  bool neg = mpz_sgn(m) < 0;
  std::size_t nb = mpz_sizeinbase(m, 2);
  DoubleDouble v;
  if (nb <= 128) {
    std::uint64_t lo = mpz_getlimbn(m, 0);
    std::uint64_t hi = mpz_size(m) > 1 ? mpz_getlimbn(m, 1) : 0;
    v = ldexp(u128_to_dd(hi, lo), -bits);
  } else {
    thread_local mpz_class tmp;
    long shift = static_cast<long>(nb) - 128;
    mpz_tdiv_q_2exp(tmp.get_mpz_t(), m, static_cast<mp_bitcnt_t>(shift));
    std::uint64_t lo = mpz_getlimbn(tmp.get_mpz_t(), 0);
    std::uint64_t hi = mpz_getlimbn(tmp.get_mpz_t(), 1);
    v = ldexp(u128_to_dd(hi, lo), static_cast<int>(shift) - bits);
  }
  return neg ? -v : v;
}

DoubleDouble fixed_to_dd(const BigInt& m, int bits) { return fixed_to_dd(m.get_mpz_t(), bits); }

DoubleDouble FixedFrac::to_dd() const { return fixed_to_dd(mantissa, bits); }

double FixedFrac::err() const { return std::ldexp(static_cast<double>(err_ulps), -bits); }

GoldenCtx::GoldenCtx(int precision_bits, int n_max, int workers)
    : bits_(precision_bits), n_max_(n_max < 1 ? 1 : n_max), workers_(workers < 1 ? 1 : workers) {
  if (precision_bits < kMinPrecisionBits)
    throw PrecisionError("working precision must be at least 64 bits, got " +
                         std::to_string(precision_bits));
  const int ext = bits_ + 64;
  // omega = (sqrt(5) - 1)/2 at ext bits via the integer square root of 5*2^(2 ext).
  BigInt five = 5;
  BigInt s;
  mpz_mul_2exp(five.get_mpz_t(), five.get_mpz_t(), 2 * ext);
  mpz_sqrt(s.get_mpz_t(), five.get_mpz_t());
  BigInt one_ext;
  mpz_setbit(one_ext.get_mpz_t(), ext);
  BigInt w_ext = (s - one_ext) / 2;
  omega_ext_ = w_ext;

  omega_.bits = bits_;
  mpz_tdiv_q_2exp(omega_.mantissa.get_mpz_t(), w_ext.get_mpz_t(), 64);
  omega_.err_ulps = 1;
  omega_dd_ = fixed_to_dd(w_ext, ext);

  powers_.resize(n_max_ + 1);
  BigInt p = w_ext;
  for (int n = 1; n <= n_max_; ++n) {
    FixedFrac& f = powers_[n];
    f.bits = bits_;
    mpz_tdiv_q_2exp(f.mantissa.get_mpz_t(), p.get_mpz_t(), 64);
    f.err_ulps = 2;
    p *= w_ext;
    mpz_tdiv_q_2exp(p.get_mpz_t(), p.get_mpz_t(), ext);
  }
}

FixedFrac GoldenCtx::power_uncached(int n) const {
  const int ext = bits_ + 64;
  BigInt p = omega_ext_;
  for (int k = 1; k < n; ++k) {
    p *= omega_ext_;
    mpz_tdiv_q_2exp(p.get_mpz_t(), p.get_mpz_t(), ext);
  }
  FixedFrac f;
  f.bits = bits_;
  mpz_tdiv_q_2exp(f.mantissa.get_mpz_t(), p.get_mpz_t(), 64);
  f.err_ulps = 2;
  return f;
}

FixedFrac GoldenCtx::omega_power(int n) const {
  if (n < 1) throw DomainError("omega_power needs n >= 1, got " + std::to_string(n));
  if (n <= n_max_) return powers_[n];
  return power_uncached(n);
}

DoubleDouble GoldenCtx::omega_power_dd(int n) const { return omega_power(n).to_dd(); }

void GoldenCtx::check_budget(std::uint64_t ulps) const {
  // err < 2^-16 <=> ulps < 2^(P-16)
  if (bits_ - 16 < 64 && ulps >= (std::uint64_t{1} << (bits_ - 16)))
    throw PrecisionError("fixed-point error budget exhausted at " + std::to_string(bits_) +
                         " bits (" + std::to_string(ulps) + " ulps); raise the precision");
}

FixedFrac GoldenCtx::frac_r_omega(const BigInt& r) const {
  if (r < 0) throw DomainError("frac_r_omega needs r >= 0");
  if (!r.fits_ulong_p()) throw PrecisionError("frac_r_omega: r too large for the error model");
  return frac_r_omega(static_cast<std::uint64_t>(r.get_ui()));
}

FixedFrac GoldenCtx::frac_r_omega(std::uint64_t r) const {
  check_budget(r + 1);
  FixedFrac f;
  f.bits = bits_;
  mpz_mul_ui(f.mantissa.get_mpz_t(), omega_.mantissa.get_mpz_t(), r);
  mpz_tdiv_r_2exp(f.mantissa.get_mpz_t(), f.mantissa.get_mpz_t(), bits_);
  f.err_ulps = r + 1;
  return f;
}

FixedFrac GoldenCtx::frac_shifted(std::uint64_t r, const FixedFrac& phase) const {
  if (phase.bits != bits_) throw DomainError("phase precision does not match the context");
  FixedFrac f = frac_r_omega(r);
  f.mantissa += phase.mantissa;
  mpz_tdiv_r_2exp(f.mantissa.get_mpz_t(), f.mantissa.get_mpz_t(), bits_);
  f.err_ulps += phase.err_ulps;
  check_budget(f.err_ulps);
  return f;
}

FixedFrac GoldenCtx::phase_from_rational(const mpq_class& q) const {
  FixedFrac f;
  f.bits = bits_;
  BigInt num = q.get_num();
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), bits_);
  mpz_fdiv_q(f.mantissa.get_mpz_t(), num.get_mpz_t(), q.get_den().get_mpz_t());
  mpz_fdiv_r_2exp(f.mantissa.get_mpz_t(), f.mantissa.get_mpz_t(), bits_);
  f.err_ulps = mpz_divisible_p(num.get_mpz_t(), q.get_den().get_mpz_t()) ? 0 : 1;
  return f;
}

FixedFrac GoldenCtx::phase_from_signed_power(int k, bool negative) const {
  FixedFrac f = omega_power(k);
  if (negative && f.mantissa != 0) {
    BigInt one;
    mpz_setbit(one.get_mpz_t(), bits_);
    f.mantissa = one - f.mantissa;
  }
  return f;
}

RotationWalker::RotationWalker(const GoldenCtx& ctx, std::uint64_t r0, const FixedFrac* phase)
    : ctx_(ctx), r_(r0), phase_err_(phase ? phase->err_ulps : 0) {
  mpz_setbit(one_.get_mpz_t(), ctx.precision());
  mpz_setbit(half_.get_mpz_t(), ctx.precision() - 1);
  FixedFrac start = phase ? ctx.frac_shifted(r0, *phase) : ctx.frac_r_omega(r0);
  cur_ = start.mantissa;
}

void RotationWalker::advance() {
  ++r_;
  mpz_add(cur_.get_mpz_t(), cur_.get_mpz_t(), ctx_.omega().mantissa.get_mpz_t());
  if (mpz_cmp(cur_.get_mpz_t(), one_.get_mpz_t()) >= 0)
    mpz_sub(cur_.get_mpz_t(), cur_.get_mpz_t(), one_.get_mpz_t());
  ctx_.check_budget(err_ulps());
}

DoubleDouble RotationWalker::value() const { return fixed_to_dd(cur_, ctx_.precision()); }

DoubleDouble RotationWalker::distance(bool& upper) const {
  if (mpz_cmp(cur_.get_mpz_t(), half_.get_mpz_t()) > 0) {
    upper = true;
    mpz_sub(tmp_.get_mpz_t(), one_.get_mpz_t(), cur_.get_mpz_t());
    return fixed_to_dd(tmp_, ctx_.precision());
  }
  upper = false;
  return fixed_to_dd(cur_, ctx_.precision());
}

double RotationWalker::err() const {
  return std::ldexp(static_cast<double>(err_ulps()), -ctx_.precision());
}

Approx rotation_offset(std::uint64_t t, const GoldenCtx& ctx) {
  if (t == 0) return {-0.5, 0.0};
  FixedFrac f = ctx.frac_r_omega(t);
  return {f.to_dd() - 0.5, f.err()};
}

namespace {

void check_level(int n) {
  if (n < 1 || n > 92)
    throw DomainError("renormalisation level must lie in [1, 92], got " + std::to_string(n));
}

// [t F_{n-1}] in [0, F_n).
std::int64_t residue(int n, long long t) {
  auto f = static_cast<__int128>(fib_u64(n));
  auto g = static_cast<__int128>(fib_u64(n - 1));
  __int128 tt = static_cast<__int128>(t) % f;
  if (tt < 0) tt += f;
  return static_cast<std::int64_t>((tt * g) % f);
}

}  // namespace

mpq_class rational_offset(int n, long long t) {
  check_level(n);
  std::int64_t j = residue(n, t);
  if (j == 0) return 0;
  BigInt f = static_cast<unsigned long>(fib_u64(n));
  mpq_class q(2 * BigInt(static_cast<long>(j)) - f, 2 * f);
  q.canonicalize();
  return q;
}

ReducedSine rational_sine_reduced(int n, long long t, const GoldenCtx& ctx) {
  check_level(n);
  const int bits = ctx.precision();
  const std::uint64_t f = fib_u64(n);
  const std::int64_t j = residue(n, t);
  FixedFrac w = ctx.omega_power(n);
  // x = (2t - omega^n (2j - F_n)) / (2 F_n), as a signed P-bit mantissa.
  BigInt num = static_cast<long>(t);
  num *= 2;
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), bits);
  BigInt corr = w.mantissa * (2 * BigInt(static_cast<long>(j)) - static_cast<unsigned long>(f));
  num -= corr;
  BigInt x;
  mpz_fdiv_q_ui(x.get_mpz_t(), num.get_mpz_t(), 2 * f);
  // Reduce mod 2: sin changes sign on [1, 2).
  mpz_fdiv_r_2exp(x.get_mpz_t(), x.get_mpz_t(), bits + 1);
  BigInt one;
  mpz_setbit(one.get_mpz_t(), bits);
  ReducedSine out;
  if (x >= one) {
    out.negative = true;
    x -= one;
  }
  BigInt half;
  mpz_setbit(half.get_mpz_t(), bits - 1);
  if (x > half) x = one - x;
  out.y = fixed_to_dd(x, bits);
  // omega^n error (2 ulps, scaled by |2j - F_n|/(2F_n) <= 1/2) plus the floor.
  out.err = std::ldexp(3.0, -bits);
  return out;
}

Approx rational_sine(int n, long long t, const GoldenCtx& ctx) {
  ReducedSine r = rational_sine_reduced(n, t, ctx);
  DoubleDouble v = 2.0 * dd::sin_pi_reduced(r.y);
  if (r.negative) v = -v;
  return {v, 2.0 * M_PI * r.err + 1e-31 * std::abs(v.hi)};
}

Approx cot_perturbation(int n, long long t, const GoldenCtx& ctx) {
  check_level(n);
  const std::uint64_t f = fib_u64(n);
  long long r = t % static_cast<long long>(f);
  if (r < 0) r += static_cast<long long>(f);
  if (r == 0)
    throw DomainError("h(n,t) is undefined for t = 0 mod F_n (n = " + std::to_string(n) +
                      ", t = " + std::to_string(t) + ")");
  DoubleDouble cot = dd::cot_pi(dd::from_i64(r) / dd::from_u64(f));
  std::int64_t j = residue(n, t);
  DoubleDouble xi =
      (dd::from_u64(2 * static_cast<std::uint64_t>(j)) - dd::from_u64(f)) / (2.0 * dd::from_u64(f));
  DoubleDouble v = cot * dd::sin_pi(ctx.omega_power_dd(n) * xi);
  return {v, 1e-30 * std::abs(v.hi)};
}

RationalSineKernel::RationalSineKernel(int n, const GoldenCtx& ctx)
    : n_(n), f_(0), g_(0) {
  check_level(n);
  f_ = fib_u64(n);
  g_ = fib_u64(n - 1);
  f_dd_ = dd::from_u64(f_);
  wn_ = ctx.omega_power_dd(n);
}

std::uint64_t RationalSineKernel::reduce(long long t, bool& flip) const {
  // t = q F_n + t', and sin(pi(x + q)) = (-1)^q sin(pi x).
  auto f = static_cast<__int128>(f_);
  __int128 tt = t;
  __int128 q = tt / f;
  __int128 r = tt % f;
  if (r < 0) {
    r += f;
    q -= 1;
  }
  flip = (q % 2) != 0;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t RationalSineKernel::residue(std::uint64_t t) const {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(t) * g_) % f_);
}

ReducedSine RationalSineKernel::reduced(long long t) const {
  bool flip = false;
  std::uint64_t tr = reduce(t, flip);
  std::uint64_t j = residue(tr);
  // x = t'/F - c with c = omega^n (2j - F)/(2F), |c| <= omega^n / 2 < 1/F,
  // so x stays in (0, 1) and sin(pi x) > 0; fold via y = min(x, 1 - x),
  // evaluating whichever side is small directly.
  DoubleDouble c = wn_ * ((dd::from_u64(2 * j) - f_dd_) / (2.0 * f_dd_));
  DoubleDouble x;
  if (2 * tr <= f_) {
    x = dd::from_u64(tr) / f_dd_ - c;
    if (x.hi > 0.5) x = 1.0 - (dd::from_u64(f_ - tr) / f_dd_ + c);
  } else {
    x = dd::from_u64(f_ - tr) / f_dd_ + c;
    if (x.hi > 0.5) x = 1.0 - x;
  }
  if (x.hi < 0.0) {
    x = -x;
    flip = !flip;
  }
  ReducedSine out;
  out.y = x;
  out.negative = flip;
  out.err = 4e-32;
  return out;
}

Approx RationalSineKernel::value(long long t) const {
  ReducedSine r = reduced(t);
  DoubleDouble v = 2.0 * dd::sin_pi_reduced(r.y);
  if (r.negative) v = -v;
  return {v, 2.0 * M_PI * r.err + 1e-31 * std::abs(v.hi)};
}

Approx RationalSineKernel::cot_perturbation(long long t) const {
  bool flip = false;
  std::uint64_t tr = reduce(t, flip);
  if (tr == 0)
    throw DomainError("h(n,t) is undefined for t = 0 mod F_n (n = " + std::to_string(n_) +
                      ", t = " + std::to_string(t) + ")");
  std::uint64_t j = residue(tr);
  DoubleDouble cot = dd::cot_pi(dd::from_u64(tr) / f_dd_);
  DoubleDouble xi = (dd::from_u64(2 * j) - f_dd_) / (2.0 * f_dd_);
  DoubleDouble v = cot * dd::sin_pi(wn_ * xi);
  return {v, 1e-30 * std::abs(v.hi)};
}

DoubleDouble RationalSineKernel::unperturbed_distance(long long t) const {
  bool flip = false;
  std::uint64_t tr = reduce(t, flip);
  std::uint64_t m = 2 * tr <= f_ ? tr : f_ - tr;
  return dd::from_u64(m) / f_dd_;
}

namespace {

struct GenRange {
  long long first = 0, last = -1;  // inclusive
  double lo = 0.0, hi = 0.0;       // the integration interval (lo, hi]
};

GenRange gen_range(double lower, double upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper))
    throw DomainError("generalised sum bounds must be finite");
  GenRange g;
  g.lo = lower - 1.0;
  g.hi = upper;
  if (g.hi <= g.lo) return g;
  g.first = static_cast<long long>(std::floor(g.lo)) + 1;
  g.last = static_cast<long long>(std::ceil(g.hi));
  return g;
}

double gen_weight(const GenRange& g, long long r) {
  double a = std::max(static_cast<double>(r - 1), g.lo);
  double b = std::min(static_cast<double>(r), g.hi);
  return b > a ? b - a : 0.0;
}

template <class Term>
DoubleDouble gen_accumulate(const GenRange& g, int workers, Term&& term) {
  if (g.last < g.first) return 0.0;
  auto count = static_cast<std::uint64_t>(g.last - g.first + 1);
  auto parts = blocks::map_blocks<DoubleDouble>(0, count, workers, [&](blocks::Range rg) {
    DoubleDouble acc = 0.0;
    for (std::uint64_t i = rg.begin; i < rg.end; ++i) {
      long long r = g.first + static_cast<long long>(i);
      double w = gen_weight(g, r);
      if (w == 0.0) continue;
      DoubleDouble v = term(r);
      acc += w == 1.0 ? v : v * w;
    }
    return acc;
  });
  return blocks::tree_reduce(std::move(parts), std::plus<>(), DoubleDouble(0.0));
}

}  // namespace

DoubleDouble gen_sum(const Series& a, double lower, double upper, int workers) {
  return gen_accumulate(gen_range(lower, upper), workers, [&](long long r) { return a(r); });
}

DoubleDouble gen_log_prod(const Series& a, double lower, double upper, int workers) {
  return gen_accumulate(gen_range(lower, upper), workers, [&](long long r) {
    DoubleDouble v = a(r);
    if (!(v.hi > 0.0))
      throw DomainError("generalised product over a non-positive term at r = " + std::to_string(r));
    return dd::log(v);
  });
}

DoubleDouble gen_prod(const Series& a, double lower, double upper, int workers) {
  return dd::exp(gen_log_prod(a, lower, upper, workers));
}

}  // namespace sudler
