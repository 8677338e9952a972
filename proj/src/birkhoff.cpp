#include "sudler/birkhoff.hpp"

#include <cmath>
#include <random>
#include <string>

#include "rotation_scan.hpp"
#include "sudler/errors.hpp"

namespace sudler {

namespace {

void check_level(int n, int lo) {
  if (n < lo || n > 92)
    throw DomainError("level n must lie in [" + std::to_string(lo) + ", 92], got " +
                      std::to_string(n));
}

void check_phase(const FixedFrac& theta, const GoldenCtx& ctx) {
  if (theta.bits != ctx.precision()) throw DomainError("phase precision does not match the context");
  if (theta.mantissa < 0 || mpz_sizeinbase(theta.mantissa.get_mpz_t(), 2) > static_cast<std::size_t>(theta.bits))
    throw DomainError("phase must lie in [0, 1)");
}

// sin(pi omega^n (x_r - 1/2)).
detail::Term centered_sine_term(const RotationWalker& w, const DoubleDouble& wn) {
  DoubleDouble v = dd::sin_pi((w.value() - 0.5) * wn);
  return {v, M_PI * wn.hi * w.err() + 1e-32};
}

DoubleDouble u128_to_dd(unsigned __int128 v) {
  return ldexp(dd::from_u64(static_cast<std::uint64_t>(v >> 64)), 64) +
         dd::from_u64(static_cast<std::uint64_t>(v));
}

}  // namespace

double partial_sum_constant() {
  const double omega = (std::sqrt(5.0) - 1.0) / 2.0;
  return 1.5 * M_PI / std::log(2.0 + omega) + 1.0;
}

Approx centered_sine_sum(int n, std::uint64_t t, const FixedFrac& theta, const GoldenCtx& ctx) {
  check_level(n, 1);
  check_phase(theta, ctx);
  if (t == 0) return {0.0, 0.0};
  DoubleDouble wn = ctx.omega_power_dd(n);
  auto total = detail::rotation_sum(ctx, 1, t + 1, &theta,
                                    [&](const RotationWalker& w) { return centered_sine_term(w, wn); });
  return {total.sum, total.err};
}

SumSeries centered_sine_series(int n, std::uint64_t t_max, const FixedFrac& theta,
                               const GoldenCtx& ctx) {
  check_level(n, 1);
  check_phase(theta, ctx);
  SumSeries out;
  out.n = n;
  out.values.resize(t_max);
  out.errs.resize(t_max);
  if (t_max == 0) return out;
  DoubleDouble wn = ctx.omega_power_dd(n);
  detail::rotation_prefix(
      ctx, 1, t_max + 1, &theta, [&](const RotationWalker& w) { return centered_sine_term(w, wn); },
      [&](std::size_t, std::uint64_t t, const DoubleDouble& prefix, double err) {
        out.values[t - 1] = prefix;
        out.errs[t - 1] = err;
      });
  return out;
}

SplitSineSums::SplitSineSums(int n, const FixedFrac& theta, const GoldenCtx& ctx)
    : n_(n), theta_(theta), ctx_(ctx) {
  check_level(n, 1);
  check_phase(theta, ctx);
  wn_ = ctx.omega_power_dd(n);
}

Approx SplitSineSums::segment(int s, std::uint64_t offset) {
  auto key = std::make_pair(s, offset);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  std::uint64_t len = fib_u64(s);
  auto total = detail::rotation_sum(ctx_, offset + 1, offset + len + 1, &theta_,
                                    [&](const RotationWalker& w) { return centered_sine_term(w, wn_); });
  Approx a{total.sum, total.err};
  cache_.emplace(key, a);
  return a;
}

Approx SplitSineSums::evaluate(std::uint64_t t) {
  ZeckRep rep = zeckendorf(t);
  Approx out{0.0, 0.0};
  std::uint64_t offset = 0;
  for (int s : rep.indices()) {
    Approx seg = segment(s, offset);
    out.value += seg.value;
    out.err += seg.err;
    offset += fib_u64(s);
  }
  return out;
}

Approx centered_sine_sum_split(int n, std::uint64_t t, const FixedFrac& theta,
                               const GoldenCtx& ctx) {
  SplitSineSums split(n, theta, ctx);
  return split.evaluate(t);
}

Phase phase_from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("phase must be finite");
  double frac = x - std::floor(x);
  if (frac >= 1.0) frac = 0.0;
  double scaled = std::ldexp(frac, 64);
  double hi = std::floor(scaled);
  double lo = std::ldexp(scaled - hi, 64);
  return (static_cast<Phase>(static_cast<std::uint64_t>(hi)) << 64) |
         static_cast<Phase>(static_cast<std::uint64_t>(lo));
}

Phase phase_from_fixed(const FixedFrac& f) {
  BigInt m = f.mantissa;
  if (f.bits >= 128)
    mpz_tdiv_q_2exp(m.get_mpz_t(), m.get_mpz_t(), f.bits - 128);
  else
    mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), 128 - f.bits);
  std::uint64_t lo = mpz_getlimbn(m.get_mpz_t(), 0);
  std::uint64_t hi = mpz_size(m.get_mpz_t()) > 1 ? mpz_getlimbn(m.get_mpz_t(), 1) : 0;
  return (static_cast<Phase>(hi) << 64) | lo;
}

DoubleDouble discrepancy_sum(std::uint64_t q, Phase alpha, Phase theta) {
  unsigned __int128 sum_hi = 0, sum_lo = 0;
  Phase ph = theta;
  const Phase mask = (static_cast<Phase>(1) << 64) - 1;
  for (std::uint64_t i = 1; i <= q; ++i) {
    ph += alpha;  // wraps mod 2^128, i.e. mod 1
    sum_hi += ph >> 64;
    sum_lo += ph & mask;
  }
  DoubleDouble total = ldexp(u128_to_dd(sum_hi), -64) + ldexp(u128_to_dd(sum_lo), -128);
  return total - ldexp(dd::from_u64(q), -1);
}

CotSum cotangent_sum(int n, const GoldenCtx& ctx) {
  check_level(n, 2);
  struct Part {
    DoubleDouble sum;
    double err = 0;
    double min_y = 1;
  };
  std::uint64_t f = fib_u64(n);
  auto parts = blocks::map_blocks<Part>(1, f + 1, ctx.workers(), [&](blocks::Range rg) {
    RotationWalker w(ctx, rg.begin);
    Part p;
    for (std::uint64_t r = rg.begin; r < rg.end; ++r) {
      if (r != rg.begin) w.advance();
      detail::Term t = detail::cot_term(w);
      p.sum += t.value;
      p.err += t.err;
      bool upper = false;
      p.min_y = std::min(p.min_y, w.distance(upper).hi);
    }
    return p;
  });
  Part total = blocks::tree_reduce(
      std::move(parts),
      [](const Part& a, const Part& b) { return Part{a.sum + b.sum, a.err + b.err, std::min(a.min_y, b.min_y)}; },
      Part{});
  CotSum out;
  out.n = n;
  out.sum = total.sum;
  DoubleDouble wn = ctx.omega_power_dd(n);
  out.normalized = total.sum * wn;
  out.min_distance = total.min_y;
  out.err = total.err;
  const double omega = ctx.omega_dd().hi;
  const double w2n = wn.hi * wn.hi;
  const double wide = (1.0 / M_PI) * ((1.0 + w2n) / std::sqrt(5.0) + omega);
  if (n % 2) {
    out.lower = -wide;
    out.upper = 1.0 / M_PI;
  } else {
    out.lower = -1.0 / M_PI;
    out.upper = wide;
  }
  double e = out.err * wn.hi;
  out.within = out.normalized.hi - e > out.lower && out.normalized.hi + e < out.upper;
  return out;
}

CotSquareSum cotangent_square_sum(int n, const GoldenCtx& ctx) {
  check_level(n, 4);
  std::uint64_t f = fib_u64(n);
  auto total = detail::rotation_sum(ctx, 1, f + 1, nullptr, [](const RotationWalker& w) {
    detail::Term t = detail::cot_term(w);
    return detail::Term{t.value * t.value, 2.0 * std::abs(t.value.hi) * t.err + t.err * t.err};
  });
  CotSquareSum out;
  out.n = n;
  out.sum = total.sum;
  out.err = total.err;

  DoubleDouble fd = dd::from_u64(f);
  DoubleDouble wn = ctx.omega_power_dd(n);
  DoubleDouble wn1 = ctx.omega_power_dd(n - 1);
  auto cot2 = [](const DoubleDouble& x) {
    DoubleDouble c = dd::cot_pi(x);
    return c * c;
  };
  // The two singular comparison points r = F_n and r = [(-1)^n F_{n-1}].
  DoubleDouble singular = cot2(wn) + cot2(wn1);
  DoubleDouble link1 = singular;
  std::uint64_t half_floor = f / 2;
  std::uint64_t half_ceil = (f + 1) / 2;
  for (std::uint64_t s = 1; s <= half_floor; ++s) link1 += cot2(dd::from_u64(s) / fd);
  for (std::uint64_t s = half_ceil; s + 2 <= f; ++s) link1 += cot2(dd::from_u64(s + 1) / fd);
  out.rational_bound = link1.hi;

  DoubleDouble link2 = 0.0;
  for (std::uint64_t s = 1; s <= half_floor; ++s) {
    DoubleDouble q = fd / (dd::pi * dd::from_u64(s));
    link2 += q * q;
  }
  DoubleDouble a = 1.0 / (dd::pi * wn), b = 1.0 / (dd::pi * wn1);
  link2 = 2.0 * link2 + a * a + b * b;
  out.inverse_square_bound = link2.hi;

  const double omega = ctx.omega_dd().hi;
  double tail = (1.0 + omega * omega) / (M_PI * M_PI * wn.hi * wn.hi);
  double f2 = static_cast<double>(f) * static_cast<double>(f);
  out.closed_bound = f2 / 6.0 + tail;
  out.corrected_bound = f2 / 3.0 + tail;
  return out;
}

std::vector<CotProfileRow> cot_profile(int n, const GoldenCtx& ctx) {
  check_level(n, 3);
  std::uint64_t f = fib_u64(n);
  std::vector<CotProfileRow> rows(f - 1);
  const double sign = n % 2 ? -1.0 : 1.0;
  detail::rotation_prefix(
      ctx, 1, f, nullptr, [](const RotationWalker& w) { return detail::cot_term(w); },
      [&](std::size_t, std::uint64_t k, const DoubleDouble& prefix, double) {
        rows[k - 1] = {k, sign * prefix.hi};
      });
  return rows;
}

Approx birkhoff_sum(std::uint64_t k, const GoldenCtx& ctx) {
  if (k < 1) throw DomainError("Birkhoff sum needs k >= 1");
  ProductResult p = sudler_product(k, ctx);
  return {2.0 * p.log_value, 2.0 * p.err};
}

namespace {

// theta = pi a, x = pi b, so every sine is evaluated with exact reduction.
void check_singular(const DoubleDouble& b) {
  // x = 2 r pi <=> b/2 is an integer.
  DoubleDouble h = ldexp(b, -1);
  DoubleDouble d = h - std::nearbyint(h.hi);
  if (std::abs(d.hi) < 1e-14 * std::max(1.0, std::abs(h.hi)))
    throw DomainError("Lagrange sum is singular at x = 2 r pi");
}

LagrangeSum lagrange_turns(const DoubleDouble& a, const DoubleDouble& b, int n) {
  check_singular(b);
  if (n < 0) throw DomainError("term count must be non-negative");
  LagrangeSum out;
  for (int k = 1; k <= n; ++k) out.direct += dd::sin_pi(a + b * static_cast<double>(k));
  DoubleDouble half = ldexp(b, -1);
  out.closed = (dd::cos_pi(a + half) - dd::cos_pi(a + b * (n + 0.5))) / (2.0 * dd::sin_pi(half));
  return out;
}

LagrangeSum lagrange_weighted_turns(const DoubleDouble& a, const DoubleDouble& b, int n) {
  check_singular(b);
  if (n < 0) throw DomainError("term count must be non-negative");
  LagrangeSum out;
  for (int k = 1; k <= n; ++k)
    out.direct += static_cast<double>(k) * dd::sin_pi(a + b * static_cast<double>(k));
  DoubleDouble half = ldexp(b, -1);
  DoubleDouble sh = dd::sin_pi(half);
  DoubleDouble num = dd::sin_pi(a + b * static_cast<double>(n)) - dd::sin_pi(a) -
                     2.0 * static_cast<double>(n) * dd::cos_pi(a + b * (n + 0.5)) * sh;
  out.closed = num / (4.0 * sh * sh);
  return out;
}

}  // namespace

LagrangeSum lagrange_sine_sum(double theta, double x, int n) {
  return lagrange_turns(DoubleDouble(theta) / dd::pi, DoubleDouble(x) / dd::pi, n);
}

LagrangeSum lagrange_weighted_sine_sum(double theta, double x, int n) {
  return lagrange_weighted_turns(DoubleDouble(theta) / dd::pi, DoubleDouble(x) / dd::pi, n);
}

bool IdentityReport::passed() const {
  for (const auto& r : results)
    if (!(r.max_rel_dev < tolerance)) return false;
  return true;
}

namespace {

enum IdentityKind {
  kLagrange,
  kLagrangeWeighted,
  kShiftedSineProduct,
  kShiftedCotSum,
  kCosineProduct,
  kDoubledSineProduct,
  kSinePiOverN,
  kSineTwoPiOverN,
  kIdentityCount
};

const char* identity_name(int k) {
  switch (k) {
    case kLagrange: return "Lagrange sine sum";
    case kLagrangeWeighted: return "weighted Lagrange sine sum";
    case kShiftedSineProduct: return "prod 2 sin(phi + pi r/n) = 2 sin(n phi)";
    case kShiftedCotSum: return "sum cot(phi + pi r/n) = n cot(n phi)";
    case kCosineProduct: return "prod 2 cos(phi + pi r/n), odd and even n";
    case kDoubledSineProduct: return "prod 2 sin(phi + 2 pi r/n), odd and even n";
    case kSinePiOverN: return "prod 2 sin(pi r/n) = n";
    case kSineTwoPiOverN: return "prod 2 sin(2 pi r/n), odd and even n";
    default: return "?";
  }
}

double rel_dev(const DoubleDouble& lhs, const DoubleDouble& rhs, double scale) {
  return std::abs((lhs - rhs).hi) / std::max(std::abs(rhs.hi), scale);
}

}  // namespace

IdentityReport identity_suite(int n_max, std::uint64_t seed, int samples, int workers) {
  if (n_max < 2) throw DomainError("identity suite needs n_max >= 2");
  if (samples < 1) throw DomainError("identity suite needs at least one sample");
  std::size_t count = static_cast<std::size_t>(n_max - 1);
  // per_n[i][k] = {checks, max deviation}
  std::vector<std::vector<std::pair<std::uint64_t, double>>> per_n(
      count, std::vector<std::pair<std::uint64_t, double>>(kIdentityCount, {0, 0.0}));

  blocks::for_each_index(count, workers, [&](std::size_t i) {
    const int n = static_cast<int>(i) + 2;
    auto& res = per_n[i];
    auto record = [&](int k, double d) {
      res[k].first += 1;
      res[k].second = std::max(res[k].second, std::isnan(d) ? INFINITY : d);
    };
    // One engine per n keeps the draws independent of scheduling.
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(n));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const DoubleDouble nd = static_cast<double>(n);

    for (int sample = 0; sample < samples; ++sample) {
      // Lagrange sums at theta = pi a, x = pi b, away from sin(x/2) = 0.
      DoubleDouble a = 2.0 * unit(rng), b;
      do {
        b = 2.0 * unit(rng);
      } while (std::abs(dd::sin_pi(ldexp(b, -1)).hi) < 1e-3);
      LagrangeSum ls = lagrange_turns(a, b, n);
      record(kLagrange, rel_dev(ls.direct, ls.closed, 1.0));
      LagrangeSum lw = lagrange_weighted_turns(a, b, n);
      record(kLagrangeWeighted, rel_dev(lw.direct, lw.closed, static_cast<double>(n)));

      // phi = pi u with sin(n phi), cos(n phi) and 1 - cos(n phi) all >= 1e-3.
      DoubleDouble u, snp, cnp;
      for (;;) {
        u = unit(rng);
        snp = dd::sin_pi(u * nd);
        cnp = dd::cos_pi(u * nd);
        if (std::abs(snp.hi) >= 1e-3 && std::abs(cnp.hi) >= 1e-3 && 1.0 - cnp.hi >= 1e-3) break;
      }
      DoubleDouble prod_sin = 1.0, prod_cos = 1.0, prod_double = 1.0, cot_sum = 0.0;
      for (int r = 0; r < n; ++r) {
        DoubleDouble shift = dd::from_i64(r) / nd;
        prod_sin *= 2.0 * dd::sin_pi(u + shift);
        prod_cos *= 2.0 * dd::cos_pi(u + shift);
        prod_double *= 2.0 * dd::sin_pi(u + 2.0 * shift);
        cot_sum += dd::cot_pi(u + shift);
      }
      record(kShiftedSineProduct, rel_dev(prod_sin, 2.0 * snp, 0.0));
      record(kShiftedCotSum, rel_dev(cot_sum, nd * dd::cot_pi(u * nd), 0.0));
      if (n % 2) {
        double sign = ((n - 1) / 2) % 2 ? -1.0 : 1.0;
        record(kCosineProduct, rel_dev(prod_cos, sign * 2.0 * cnp, 0.0));
        record(kDoubledSineProduct, rel_dev(prod_double, sign * 2.0 * snp, 0.0));
      } else {
        double sign = (n / 2) % 2 ? -1.0 : 1.0;
        record(kCosineProduct, rel_dev(prod_cos, sign * 2.0 * snp, 0.0));
        record(kDoubledSineProduct, rel_dev(prod_double, sign * 2.0 * (1.0 - cnp), 0.0));
      }
    }

    // Evaluations at rational points.
    DoubleDouble p1 = 1.0, p2 = 1.0;
    for (int r = 1; r < n; ++r) {
      DoubleDouble x = dd::from_i64(r) / nd;
      p1 *= 2.0 * dd::sin_pi(x);
      if (n % 2 == 1 || 2 * r != n) p2 *= 2.0 * dd::sin_pi(2.0 * x);
    }
    record(kSinePiOverN, rel_dev(p1, nd, 0.0));
    if (n % 2) {
      double sign = ((n - 1) / 2) % 2 ? -1.0 : 1.0;
      record(kSineTwoPiOverN, rel_dev(p2, sign * nd, 0.0));
    } else {
      double sign = (n / 2 - 1) % 2 ? -1.0 : 1.0;
      record(kSineTwoPiOverN, rel_dev(p2, sign * nd * nd / 4.0, 0.0));
    }
  });

  IdentityReport report;
  report.n_max = n_max;
  for (int k = 0; k < kIdentityCount; ++k) {
    IdentityResult r;
    r.name = identity_name(k);
    for (std::size_t i = 0; i < count; ++i) {
      const auto& [checks, dev] = per_n[i][k];
      r.checks += checks;
      if (checks && (r.worst_n == 0 || dev > r.max_rel_dev)) {
        r.max_rel_dev = dev;
        r.worst_n = static_cast<int>(i) + 2;
      }
    }
    report.results.push_back(r);
  }
  return report;
}

}  // namespace sudler
