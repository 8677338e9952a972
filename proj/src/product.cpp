#include "sudler/product.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rotation_scan.hpp"
#include "sudler/errors.hpp"

namespace sudler {

namespace detail {

Term log_sine_term(const RotationWalker& w, bool allow_zero, bool* zero) {
  bool upper = false;
  DoubleDouble y = w.distance(upper);
  double ey = w.err();
  if (!(y.hi > 2.0 * ey)) {
    if (allow_zero) {
      if (zero) *zero = true;
      return {0.0, 0.0};
    }
    throw PrecisionError("factor at r = " + std::to_string(w.r()) +
                         " cannot be certified nonzero at this precision");
  }
  DoubleDouble v = dd::log(2.0 * dd::sin_pi_reduced(y));
  // d/dy log sin(pi y) = pi cot(pi y) <= 1/y on (0, 1/2].
  return {v, ey / (y.hi - ey) + 1e-30};
}

Term cot_term(const RotationWalker& w) {
  bool upper = false;
  DoubleDouble y = w.distance(upper);
  double ey = w.err();
  if (!(y.hi > 2.0 * ey))
    throw PrecisionError("cot argument at r = " + std::to_string(w.r()) +
                         " is too close to an integer for this precision");
  auto [s, c] = dd::sincos_pi_reduced(y);
  DoubleDouble v = c / s;
  if (upper) v = -v;
  // |d/dy cot(pi y)| = pi / sin^2(pi y) <= pi / (4 y^2) since sin(pi y) >= 2y.
  double lo = y.hi - ey;
  return {v, ey / (lo * lo) + 1e-30 * std::abs(v.hi)};
}

}  // namespace detail

namespace {

void check_level(int n, int lo) {
  if (n < lo || n > 92)
    throw DomainError("level n must lie in [" + std::to_string(lo) + ", 92], got " +
                      std::to_string(n));
}

DoubleDouble log_u64(std::uint64_t v) { return dd::log(dd::from_u64(v)); }

}  // namespace

ProductResult make_product_result(std::uint64_t k, const DoubleDouble& log_value, double err) {
  ProductResult r;
  r.k = k;
  r.log_value = log_value;
  r.err = err;
  if (std::isinf(log_value.hi) && log_value.hi < 0)
    r.value = 0.0;
  else
    r.value = dd::exp(log_value).hi;
  return r;
}

ProductResult sudler_product(std::uint64_t k, const GoldenCtx& ctx) {
  if (k == 0) return make_product_result(0, 0.0, 0.0);
  auto total = detail::rotation_sum(ctx, 1, k + 1, nullptr,
                                    [](const RotationWalker& w) { return detail::log_sine_term(w); });
  return make_product_result(k, total.sum, total.err);
}

double rational_sudler_product(long long p, long long q, long long n) {
  if (q <= 0 || p <= 0 || p >= q)
    throw DomainError("rational angle needs 0 < p < q, got p = " + std::to_string(p) +
                      ", q = " + std::to_string(q));
  if (std::gcd(p, q) != 1)
    throw DomainError("rational angle " + std::to_string(p) + "/" + std::to_string(q) +
                      " is not in lowest terms");
  if (n < 0) throw DomainError("term count must be non-negative");
  if (n >= q) return 0.0;
  DoubleDouble acc = 0.0;
  DoubleDouble qd = dd::from_i64(q);
  long long res = 0;
  for (long long r = 1; r <= n; ++r) {
    res = (res + p) % q;
    long long m = std::min(res, q - res);
    acc += dd::log(2.0 * dd::sin_pi_reduced(dd::from_i64(m) / qd));
  }
  return dd::exp(acc).hi;
}

ProductResult fibonacci_product(int n, const GoldenCtx& ctx) {
  check_level(n, 1);
  return sudler_product(fib_u64(n), ctx);
}

ProductResult boundary_factor(int n, const GoldenCtx& ctx) {
  check_level(n, 1);
  FixedFrac w = ctx.omega_power(n);
  BigInt one;
  mpz_setbit(one.get_mpz_t(), ctx.precision());
  BigInt half;
  mpz_setbit(half.get_mpz_t(), ctx.precision() - 1);
  BigInt m = w.mantissa > half ? BigInt(one - w.mantissa) : w.mantissa;
  DoubleDouble y = fixed_to_dd(m, ctx.precision());
  DoubleDouble lg = dd::log(2.0 * dd::from_u64(fib_u64(n))) + dd::log(dd::sin_pi_reduced(y));
  return make_product_result(1, lg, w.err() / y.hi + 1e-30);
}

ProductResult perturbation_factor(int n, const GoldenCtx& ctx) {
  check_level(n, 1);
  RationalSineKernel kern(n, ctx);
  std::uint64_t f = kern.modulus();
  if (f < 2) return make_product_result(0, 0.0, 0.0);
  auto parts = blocks::map_blocks<detail::BlockTotal>(1, f, ctx.workers(), [&](blocks::Range rg) {
    detail::BlockTotal acc;
    for (std::uint64_t t = rg.begin; t < rg.end; ++t) {
      ReducedSine s = kern.reduced(static_cast<long long>(t));
      if (s.negative || !(s.y.hi > 0.0))
        throw DomainError("s(n,t) must be positive for 1 <= t <= F_n - 1");
      DoubleDouble d = kern.unperturbed_distance(static_cast<long long>(t));
      acc.sum += dd::log(dd::sin_pi_reduced(s.y) / dd::sin_pi_reduced(d));
      acc.err += s.err / s.y.hi + 2e-30;
    }
    return acc;
  });
  auto total = blocks::tree_reduce(std::move(parts), detail::merge, detail::BlockTotal{});
  return make_product_result(f - 1, total.sum, total.err);
}

ProductResult perturbation_factor_star(int n, const GoldenCtx& ctx) {
  check_level(n, 1);
  RationalSineKernel kern(n, ctx);
  std::uint64_t f = kern.modulus();
  if (f < 2) return make_product_result(0, 0.0, 0.0);
  auto parts = blocks::map_blocks<detail::BlockTotal>(1, f, ctx.workers(), [&](blocks::Range rg) {
    detail::BlockTotal acc;
    for (std::uint64_t t = rg.begin; t < rg.end; ++t) {
      Approx h = kern.cot_perturbation(static_cast<long long>(t));
      DoubleDouble one_minus = 1.0 - h.value;
      if (!(one_minus.hi > 0.0)) throw DomainError("1 - h(n,t) must be positive");
      acc.sum += dd::log(one_minus);
      acc.err += h.err / one_minus.hi + 1e-30;
    }
    return acc;
  });
  auto total = blocks::tree_reduce(std::move(parts), detail::merge, detail::BlockTotal{});
  return make_product_result(f - 1, total.sum, total.err);
}

namespace {

ProductResult square_correction(int n, double upper, const GoldenCtx& ctx) {
  RationalSineKernel kern(n, ctx);
  DoubleDouble s0 = dd::sin_pi_reduced(kern.reduced(0).y);
  Series term = [&](long long t) {
    DoubleDouble st = dd::sin_pi_reduced(kern.reduced(t).y);
    DoubleDouble ratio = s0 / st;
    return 1.0 - ratio * ratio;
  };
  DoubleDouble lg = gen_log_prod(term, 1.0, upper, ctx.workers());
  double terms = std::max(0.0, std::ceil(upper));
  return make_product_result(static_cast<std::uint64_t>(terms), lg, 1e-29 * (terms + 1.0));
}

}  // namespace

ProductResult square_correction_factor(int n, const GoldenCtx& ctx) {
  check_level(n, 1);
  return square_correction(n, (static_cast<double>(fib_u64(n)) - 1.0) / 2.0, ctx);
}

ProductResult square_correction_factor_upper_half(int n, const GoldenCtx& ctx) {
  check_level(n, 1);
  return square_correction(n, static_cast<double>(fib_u64(n)) / 2.0, ctx);
}

LimitProduct limit_square_correction(std::uint64_t terms, const GoldenCtx& ctx) {
  if (terms < 1) throw DomainError("limit product needs at least one term");
  const DoubleDouble two_sqrt5 = 2.0 * dd::sqrt5;
  struct Local {
    DoubleDouble min_prefix, max_prefix, first, last;
    bool decreasing = true;
    bool seen = false;
  };
  std::size_t nblocks = blocks::split(1, terms + 1).size();
  std::vector<Local> local(nblocks);
  std::vector<DoubleDouble> first(1);
  auto term = [&](const RotationWalker& w) {
    DoubleDouble u = two_sqrt5 * dd::from_u64(w.r()) - 2.0 * (w.value() - 0.5);
    DoubleDouble inv2 = 1.0 / (u * u);
    if (w.r() == 1) first[0] = inv2;
    DoubleDouble f = 1.0 - inv2;
    return detail::Term{dd::log(f), w.err() * 4.0 / u.hi + 1e-30};
  };
  // Prefix logs carry the block offsets, so block-local extremes are global.
  auto total = detail::rotation_prefix(
      ctx, 1, terms + 1, nullptr, term,
      [&](std::size_t b, std::uint64_t, const DoubleDouble& prefix, double) {
        Local& l = local[b];
        if (!l.seen) {
          l.min_prefix = l.max_prefix = l.first = prefix;
          l.seen = true;
        } else {
          if (!(prefix < l.last)) l.decreasing = false;
          if (prefix < l.min_prefix) l.min_prefix = prefix;
          if (prefix > l.max_prefix) l.max_prefix = prefix;
        }
        l.last = prefix;
      });
  LimitProduct out;
  out.terms = terms;
  out.log_value = total.sum;
  out.err = total.err;
  out.value = dd::exp(total.sum).hi;
  out.squared = dd::exp(2.0 * total.sum).hi;
  DoubleDouble mn = local[0].min_prefix, mx = local[0].max_prefix;
  // The empty product 1 precedes the first partial product.
  out.decreasing = local[0].first < DoubleDouble(0.0);
  for (std::size_t b = 0; b < local.size(); ++b) {
    const Local& l = local[b];
    if (l.min_prefix < mn) mn = l.min_prefix;
    if (l.max_prefix > mx) mx = l.max_prefix;
    out.decreasing = out.decreasing && l.decreasing;
    if (b > 0 && !(l.first < local[b - 1].last)) out.decreasing = false;
  }
  out.min_partial = dd::exp(mn).hi;
  out.max_partial = dd::exp(mx).hi;
  out.first_inverse_square = first[0].hi;
  return out;
}

Decomposition decompose(int n, const GoldenCtx& ctx) {
  check_level(n, 1);
  Decomposition d;
  d.n = n;
  d.q = fibonacci_product(n, ctx);
  d.a = boundary_factor(n, ctx);
  d.b = perturbation_factor(n, ctx);
  d.c = square_correction_factor(n, ctx);
  d.log_residual = d.q.log_value - (d.a.log_value + d.b.log_value + d.c.log_value);
  // Q - ABC = Q (1 - exp(-log_residual))
  DoubleDouble rel = 1.0 - dd::exp(-d.log_residual);
  d.residual = (rel * d.q.value).hi;
  d.relative_residual = std::abs(rel.hi);
  d.err = d.q.err + d.a.err + d.b.err + d.c.err;
  return d;
}

ProductResult predecessor_ratio(int n, const GoldenCtx& ctx) {
  check_level(n, 2);
  std::uint64_t f = fib_u64(n);
  ProductResult p = sudler_product(f - 1, ctx);
  return make_product_result(f - 1, p.log_value - log_u64(f), p.err + 1e-30);
}

std::vector<ProfileRow> profile(int n_max, std::uint64_t stride, const GoldenCtx& ctx) {
  check_level(n_max, 1);
  if (stride < 1) throw DomainError("profile stride must be at least 1");
  std::uint64_t kmax = fib_u64(n_max);
  std::uint64_t rows = (kmax - 1) / stride + 1;
  std::vector<ProfileRow> out(rows);
  detail::rotation_prefix(
      ctx, 1, kmax + 1, nullptr, [](const RotationWalker& w) { return detail::log_sine_term(w); },
      [&](std::size_t, std::uint64_t k, const DoubleDouble& prefix, double) {
        if ((k - 1) % stride) return;
        out[(k - 1) / stride] = {k, dd::exp(prefix).hi, prefix.hi};
      });
  return out;
}

}  // namespace sudler
