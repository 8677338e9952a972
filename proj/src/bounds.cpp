#include "sudler/bounds.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <string>

#include "rotation_scan.hpp"
#include "sudler/errors.hpp"

namespace sudler {

// ---- inequality toolkit ----

ConvexSineReport convex_sine_check(std::uint64_t samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("convex sine check needs at least one sample");
  ConvexSineReport rep;
  rep.min_lower_margin = INFINITY;
  rep.min_upper_margin = INFINITY;
  // x = pi t with t in (0, 1/2), so sin x = sin_pi(t) is reduced exactly.
  auto check = [&](const DoubleDouble& t) {
    DoubleDouble s = dd::sin_pi(t);
    double lower = (s - 2.0 * t).hi;
    double upper = (dd::pi * t - s).hi;
    ++rep.checks;
    if (!(lower > 0.0) || !(upper > 0.0)) {
      ++rep.violations;
      rep.worst_x = (dd::pi * t).hi;
    }
    if (lower < rep.min_lower_margin) rep.min_lower_margin = lower;
    if (upper < rep.min_upper_margin) rep.min_upper_margin = upper;
  };
  for (std::uint64_t i = 1; i <= samples; ++i)
    check(DoubleDouble(static_cast<double>(i)) / (2.0 * static_cast<double>(samples + 1)));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 0.5);
  for (std::uint64_t i = 0; i < samples; ++i) {
    double t = unit(rng);
    if (t == 0.0) t = 0.25;
    check(t);
  }
  check(DoubleDouble(1e-6) / dd::pi);
  check(0.25);
  return rep;
}

ProdBoundsResult prod_bounds_check(const std::vector<double>& a) {
  ProdBoundsResult out;
  DoubleDouble total = 0.0, product = 1.0;
  int nonzero = 0;
  for (double v : a) {
    if (!(std::abs(v) < 1.0)) throw DomainError("every |a_t| must be below 1");
    total += std::abs(v);
    product *= 1.0 + DoubleDouble(v);
    if (v != 0.0) ++nonzero;
  }
  if (!(total.hi < 1.0)) throw DomainError("sum of |a_t| must be below 1, got " + std::to_string(total.hi));
  out.total = total.hi;
  out.product = product;
  out.lower = 1.0 - total;
  out.upper = 1.0 / (1.0 - total);
  if (nonzero == 0) {
    out.skipped = true;
    out.holds = product.hi == 1.0 && product.lo == 0.0;
    return out;
  }
  out.strict = nonzero >= 2;
  if (out.strict)
    out.holds = out.lower < product && product < out.upper;
  else
    out.holds = out.lower <= product && product < out.upper;
  return out;
}

ProdBoundsScan prod_bounds_scan(std::uint64_t count, std::uint64_t seed, int max_len) {
  if (max_len < 2) throw DomainError("sequence length must allow at least 2 entries");
  ProdBoundsScan scan;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len_dist(2, max_len);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> weight(1.0);
  std::vector<double> a;
  for (std::uint64_t i = 0; i < count; ++i) {
    int len = len_dist(rng);
    double target = unit(rng) * 0.999999;
    a.assign(len, 0.0);
    double wsum = 0;
    for (auto& v : a) wsum += (v = weight(rng));
    for (auto& v : a) {
      v = target * v / wsum;
      if (unit(rng) < 0.5) v = -v;
    }
    ProdBoundsResult r = prod_bounds_check(a);
    ++scan.sequences;
    if (r.strict) ++scan.strict_checks;
    if (!r.holds) ++scan.violations;
  }
  return scan;
}

namespace {

DoubleDouble log_lower_margin(double x) {
  DoubleDouble xd = x;
  return dd::log(1.0 + xd) - xd + xd * xd;
}

}  // namespace

bool LogLowerReport::passed() const {
  return grid_points > 0 && violations == 0 && value_at_zero == 0.0 && value_at_half > 0.0 &&
         std::abs(slope_at_half) < 1e-15 && root_hi - root_lo < 1e-6 && root_lo > -0.684 &&
         root_hi < -0.683;
}

LogLowerReport log_lower_check(std::uint64_t grid) {
  if (grid < 1) throw DomainError("log lower check needs at least one grid point");
  LogLowerReport rep;
  rep.min_margin = INFINITY;
  const double lo = -0.683, hi = 10.0;
  for (std::uint64_t i = 1; i <= grid; ++i) {
    double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid);
    double f = log_lower_margin(x).hi;
    ++rep.grid_points;
    // Equality only at x = 0.
    if (f < 0.0 || (x != 0.0 && f <= 0.0)) ++rep.violations;
    if (x != 0.0 && f < rep.min_margin) {
      rep.min_margin = f;
      rep.min_margin_x = x;
    }
  }
  rep.value_at_zero = log_lower_margin(0.0).hi;
  rep.value_at_half = log_lower_margin(-0.5).hi;
  rep.slope_at_half = (1.0 / DoubleDouble(0.5) - 1.0 - 1.0).hi;
  // f -> -inf as x -> -1+, f(-1/2) > 0.
  double a = -1.0 + 1e-9, b = -0.5;
  while (b - a >= 1e-7) {
    double m = 0.5 * (a + b);
    if (log_lower_margin(m).hi < 0.0)
      a = m;
    else
      b = m;
  }
  rep.root_lo = a;
  rep.root_hi = b;
  return rep;
}

// ---- shifted products ----

Shift shift_from_rational(const mpq_class& alpha, const GoldenCtx& ctx) {
  Shift s;
  s.phase = ctx.phase_from_rational(alpha);
  double hi = alpha.get_d();
  mpq_class rest = alpha - mpq_class(hi);
  s.value = dd_detail::quick_two_sum(hi, rest.get_d());
  return s;
}

Shift shift_from_power(int k, bool negative, const GoldenCtx& ctx) {
  Shift s;
  s.phase = ctx.phase_from_signed_power(k, negative);
  s.value = ctx.omega_power_dd(k);
  if (negative) s.value = -s.value;
  return s;
}

Shift shift_from_scaled_power(int k, double v, const GoldenCtx& ctx) {
  if (!(std::abs(v) <= 1.0)) throw DomainError("shift scale must lie in [-1, 1]");
  FixedFrac p = ctx.omega_power(k);
  mpq_class scaled = mpq_class(p.mantissa) * mpq_class(v);
  Shift s;
  s.phase.bits = p.bits;
  mpz_fdiv_q(s.phase.mantissa.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  mpz_fdiv_r_2exp(s.phase.mantissa.get_mpz_t(), s.phase.mantissa.get_mpz_t(), p.bits);
  s.phase.err_ulps = p.err_ulps + 1;
  s.value = ctx.omega_power_dd(k) * v;
  return s;
}

double shifted_ratio_upper_bound() {
  const double omega = (std::sqrt(5.0) - 1.0) / 2.0;
  return std::exp(omega * (1.0 / std::sqrt(5.0) + omega));
}

ProductResult shifted_product_raw(int n, const Shift& alpha, const GoldenCtx& ctx) {
  if (n < 1 || n > 92) throw DomainError("level n must lie in [1, 92], got " + std::to_string(n));
  std::uint64_t f = fib_u64(n);
  std::atomic<bool> vanished{false};
  auto total = detail::rotation_sum(ctx, 1, f + 1, &alpha.phase, [&](const RotationWalker& w) {
    bool zero = false;
    detail::Term t = detail::log_sine_term(w, true, &zero);
    if (zero) vanished.store(true);
    return t;
  });
  if (vanished.load()) {
    ProductResult r = make_product_result(f, -INFINITY, 0.0);
    return r;
  }
  return make_product_result(f, total.sum, total.err);
}

namespace {

ShiftedProduct shifted_product_with(int n, const Shift& alpha, const ProductResult& q, const GoldenCtx& ctx) {
  if (n < 2 || n > 92) throw DomainError("shifted product needs 2 <= n <= 92, got " + std::to_string(n));
  DoubleDouble limit = ctx.omega_power_dd(n + 1);
  if (abs(alpha.value) > limit * (1.0 + 1e-25))
    throw DomainError("shift |alpha| = " + dd::to_string(abs(alpha.value), 6) +
                      " exceeds omega^(n+1) = " + dd::to_string(limit, 6));
  std::uint64_t f = fib_u64(n);
  ShiftedProduct out;
  out.n = n;
  out.alpha = alpha.value;

  auto direct = detail::rotation_sum(ctx, 1, f + 1, &alpha.phase,
                                     [](const RotationWalker& w) { return detail::log_sine_term(w); });

  // sin pi(x + alpha) = sin(pi x) (cos pi alpha + cot(pi x) sin pi alpha)
  DoubleDouble sa = dd::sin_pi(alpha.value), ca = dd::cos_pi(alpha.value);
  auto correction = detail::rotation_sum(ctx, 1, f + 1, nullptr, [&](const RotationWalker& w) {
    detail::Term c = detail::cot_term(w);
    DoubleDouble factor = ca + c.value * sa;
    if (!(factor.hi > 0.0))
      throw Error("shifted factor cos(pi alpha) + cot(pi r omega) sin(pi alpha) is not positive at r = " +
                  std::to_string(w.r()));
    return detail::Term{dd::log(factor), std::abs(sa.hi) * c.err / factor.hi + 1e-31};
  });

  out.log_direct = direct.sum;
  out.log_factored = q.log_value + correction.sum;
  out.err = direct.err + q.err + correction.err;
  out.value = dd::exp(out.log_direct).hi;
  out.ratio = dd::exp(out.log_direct - q.log_value).hi;
  out.agree = std::abs((out.log_direct - out.log_factored).hi) <= out.err + 1e-28 * static_cast<double>(f);
  return out;
}

}  // namespace

ShiftedProduct shifted_product(int n, const Shift& alpha, const GoldenCtx& ctx) {
  if (n < 2 || n > 92) throw DomainError("shifted product needs 2 <= n <= 92, got " + std::to_string(n));
  return shifted_product_with(n, alpha, fibonacci_product(n, ctx), ctx);
}

ShiftLevel ShiftScan::summary(int from) const {
  ShiftLevel s;
  s.min_value = s.min_ratio = INFINITY;
  s.max_value = s.max_ratio = -INFINITY;
  for (const auto& l : levels) {
    if (l.n < from) continue;
    s.evaluations += l.evaluations;
    s.min_value = std::min(s.min_value, l.min_value);
    s.max_value = std::max(s.max_value, l.max_value);
    s.min_ratio = std::min(s.min_ratio, l.min_ratio);
    s.max_ratio = std::max(s.max_ratio, l.max_ratio);
    s.all_agree = s.all_agree && l.all_agree;
  }
  return s;
}

ShiftScan shifted_product_scan(int n_lo, int n_hi, int interior, std::uint64_t seed,
                               const GoldenCtx& ctx) {
  if (n_lo < 2 || n_hi < n_lo) throw DomainError("shift scan needs 2 <= n_lo <= n_hi");
  if (interior < 0) throw DomainError("interior sample count must be non-negative");
  ShiftScan scan;
  for (int n = n_lo; n <= n_hi; ++n) {
    ShiftLevel lv;
    lv.n = n;
    lv.min_value = lv.min_ratio = INFINITY;
    lv.max_value = lv.max_ratio = -INFINITY;
    ProductResult q = fibonacci_product(n, ctx);
    auto record = [&](const Shift& a) {
      ShiftedProduct p = shifted_product_with(n, a, q, ctx);
      ++lv.evaluations;
      lv.min_value = std::min(lv.min_value, p.value);
      lv.max_value = std::max(lv.max_value, p.value);
      lv.min_ratio = std::min(lv.min_ratio, p.ratio);
      lv.max_ratio = std::max(lv.max_ratio, p.ratio);
      lv.all_agree = lv.all_agree && p.agree;
    };
    record(shift_from_power(n + 1, false, ctx));
    record(shift_from_power(n + 1, true, ctx));
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(n));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int i = 0; i < interior; ++i) record(shift_from_scaled_power(n + 1, unit(rng), ctx));
    scan.levels.push_back(lv);
  }
  return scan;
}

// ---- Zeckendorf split ----

SplitSegment SplitProducts::segment(int s, std::uint64_t offset) {
  auto key = std::make_pair(s, offset);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  std::uint64_t len = fib_u64(s);
  // r omega + k_s omega = (r + k_s) omega, so the segment is a plain range.
  auto total = detail::rotation_sum(ctx_, offset + 1, offset + len + 1, nullptr,
                                    [](const RotationWalker& w) { return detail::log_sine_term(w); });
  SplitSegment seg;
  seg.s = s;
  seg.offset = offset;
  seg.log_value = total.sum;
  seg.err = total.err;
  double x = (rotation_offset(offset, ctx_).value + 0.5).hi;
  seg.alpha = x > 0.5 ? x - 1.0 : x;
  seg.alpha_within = std::abs(seg.alpha) < ctx_.omega_power_dd(s + 1).hi;
  cache_.emplace(key, seg);
  return seg;
}

SplitProduct SplitProducts::evaluate(std::uint64_t k) {
  if (k < 1) throw DomainError("split product needs k >= 1");
  SplitProduct out;
  out.k = k;
  std::uint64_t offset = 0;
  for (int s : zeckendorf(k).indices()) {
    SplitSegment seg = segment(s, offset);
    out.log_split += seg.log_value;
    out.err += seg.err;
    out.segments.push_back(seg);
    offset += fib_u64(s);
  }
  return out;
}

SplitCheck split_product(std::uint64_t k, const GoldenCtx& ctx) {
  SplitProducts sp(ctx);
  SplitCheck out;
  out.split = sp.evaluate(k);
  out.direct = sudler_product(k, ctx);
  out.rel_diff = std::abs(std::expm1((out.split.log_split - out.direct.log_value).hi));
  return out;
}

// ---- power-law envelope ----

PowerLawReport power_law_scan(std::uint64_t k_max, const GoldenCtx& ctx,
                              std::vector<PowerLawRow>* rows) {
  if (k_max < 2) throw DomainError("power-law scan needs k_max >= 2");
  struct Extrema {
    double lo = INFINITY, hi = -INFINITY;
    std::uint64_t argmin = 0, argmax = 0;
  };
  std::size_t nblocks = blocks::split(1, k_max + 1).size();
  std::vector<Extrema> per_block(nblocks);
  if (rows) rows->assign(k_max - 1, PowerLawRow{0, 0.0});
  detail::rotation_prefix(
      ctx, 1, k_max + 1, nullptr, [](const RotationWalker& w) { return detail::log_sine_term(w); },
      [&](std::size_t block, std::uint64_t k, const DoubleDouble& prefix, double) {
        if (k < 2) return;  // log k = 0
        double ratio = (prefix / dd::log(dd::from_u64(k))).hi;
        Extrema& e = per_block[block];
        if (ratio < e.lo) e.lo = ratio, e.argmin = k;
        if (ratio > e.hi) e.hi = ratio, e.argmax = k;
        if (rows) (*rows)[k - 2] = {k, ratio};
      });
  PowerLawReport rep;
  rep.k_max = k_max;
  Extrema all;
  // Blocks in increasing k; strict comparisons keep the smallest k on ties.
  for (const Extrema& e : per_block) {
    if (e.lo < all.lo) all.lo = e.lo, all.argmin = e.argmin;
    if (e.hi > all.hi) all.hi = e.hi, all.argmax = e.argmax;
  }
  rep.k1 = all.lo;
  rep.k2 = all.hi;
  rep.argmin = all.argmin;
  rep.argmax = all.argmax;
  return rep;
}

}  // namespace sudler
