#pragma once

// The inequality toolkit (convexity of sine, product sandwich, log(1+x) >=
// x - x^2), products along a shifted rotation, the Zeckendorf split of P_k
// and the power-law envelope of P_k.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "sudler/golden.hpp"
#include "sudler/product.hpp"

namespace sudler {

// 2x/pi < sin x < x on (0, pi/2): a uniform grid of `samples` points, the same
// number of random points, plus x = 1e-6 and x = pi/4.
struct ConvexSineReport {
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  double min_lower_margin = 0;  // min of sin x - 2x/pi
  double min_upper_margin = 0;  // min of x - sin x
  double worst_x = 0;
  bool passed() const { return checks > 0 && violations == 0; }
};

ConvexSineReport convex_sine_check(std::uint64_t samples, std::uint64_t seed);

// 1 - A < prod (1 + a_t) < 1/(1 - A) with A = sum |a_t|.
struct ProdBoundsResult {
  double total = 0;  // A
  DoubleDouble product;
  DoubleDouble lower, upper;
  // Strict when two or more entries are nonzero; with a single nonzero
  // entry the lower side can be attained, with none the check is skipped.
  bool strict = false;
  bool skipped = false;
  bool holds = false;
};

// DomainError unless every |a_t| < 1 and A < 1.
ProdBoundsResult prod_bounds_check(const std::vector<double>& a);

struct ProdBoundsScan {
  std::uint64_t sequences = 0;
  std::uint64_t strict_checks = 0;
  std::uint64_t violations = 0;
  bool passed() const { return sequences > 0 && violations == 0; }
};

// Random admissible sequences of length 2..max_len.
ProdBoundsScan prod_bounds_scan(std::uint64_t count, std::uint64_t seed, int max_len = 50);

// log(1+x) >= x - x^2 for x > -0.683.
struct LogLowerReport {
  std::uint64_t grid_points = 0;
  std::uint64_t violations = 0;
  double min_margin = 0;    // over grid points away from 0
  double min_margin_x = 0;
  double value_at_zero = 0;     // f(0), f = log(1+x) - x + x^2
  double value_at_half = 0;     // f(-1/2), the other critical point
  double slope_at_half = 0;     // f'(-1/2)
  double root_lo = 0, root_hi = 0;  // bisection bracket of the negative root
  bool passed() const;
};

LogLowerReport log_lower_check(std::uint64_t grid = 100000);

// A shift alpha of the rotation: its image mod 1 as a phase and its signed
// value.
struct Shift {
  FixedFrac phase;
  DoubleDouble value;
};

Shift shift_from_rational(const mpq_class& alpha, const GoldenCtx& ctx);
// sign * omega^k
Shift shift_from_power(int k, bool negative, const GoldenCtx& ctx);
// omega^k * v for a double v; the phase is exact up to a few ulps.
Shift shift_from_scaled_power(int k, double v, const GoldenCtx& ctx);

struct ShiftedProduct {
  int n = 0;
  DoubleDouble alpha;
  DoubleDouble log_direct;    // sum log|2 sin pi(r omega + alpha)|
  DoubleDouble log_factored;  // log Q_n + sum log|cos pi alpha + cot pi r omega sin pi alpha|
  double value = 0;           // exp(log_direct)
  double ratio = 0;           // value / Q_n
  double err = 0;             // combined error of both logs
  bool agree = false;
};

// prod_{r=1}^{F_n} |2 sin pi(r omega + alpha)| for n >= 2 and |alpha| <=
// omega^{n+1}, directly and in factored form. DomainError outside that range.
ShiftedProduct shifted_product(int n, const Shift& alpha, const GoldenCtx& ctx);

// The direct product with no restriction on n or alpha; 0 when a factor
// vanishes at working precision (n = 1, alpha = omega^2 is the standard case).
ProductResult shifted_product_raw(int n, const Shift& alpha, const GoldenCtx& ctx);

// exp(omega (1/sqrt5 + omega)), the upper bound on shifted_product / Q_n.
double shifted_ratio_upper_bound();

struct ShiftLevel {
  int n = 0;
  std::uint64_t evaluations = 0;
  double min_value = 0, max_value = 0;  // extrema of the product
  double min_ratio = 0, max_ratio = 0;  // extrema of product / Q_n
  bool all_agree = true;
};

struct ShiftScan {
  std::vector<ShiftLevel> levels;
  // Aggregate over levels n >= from.
  ShiftLevel summary(int from = 0) const;
};

// Both endpoints alpha = +-omega^{n+1} and `interior` random interior shifts
// for each n in [n_lo, n_hi].
ShiftScan shifted_product_scan(int n_lo, int n_hi, int interior, std::uint64_t seed,
                               const GoldenCtx& ctx);

struct SplitSegment {
  int s = 0;                 // segment length F_s
  std::uint64_t offset = 0;  // k_s, the sum of the Zeckendorf terms above s
  DoubleDouble log_value;
  double err = 0;
  double alpha = 0;          // {k_s omega} as a signed representative
  bool alpha_within = false; // |alpha| < omega^{s+1}
};

struct SplitProduct {
  std::uint64_t k = 0;
  DoubleDouble log_split;
  double err = 0;
  std::vector<SplitSegment> segments;
};

// P_k as the product over Zeckendorf segments; segments are memoised on
// (s, k_s) across calls.
class SplitProducts {
 public:
  explicit SplitProducts(const GoldenCtx& ctx) : ctx_(ctx) {}
  SplitProduct evaluate(std::uint64_t k);
  std::size_t cached_segments() const { return cache_.size(); }

 private:
  SplitSegment segment(int s, std::uint64_t offset);

  const GoldenCtx& ctx_;
  std::map<std::pair<int, std::uint64_t>, SplitSegment> cache_;
};

struct SplitCheck {
  SplitProduct split;
  ProductResult direct;
  double rel_diff = 0;  // |split/direct - 1|
};

SplitCheck split_product(std::uint64_t k, const GoldenCtx& ctx);

struct PowerLawRow {
  std::uint64_t k;
  double ratio;  // log P_k / log k
};

struct PowerLawReport {
  std::uint64_t k_max = 0;
  double k1 = 0, k2 = 0;  // min and max of log P_k / log k over 2 <= k <= k_max
  std::uint64_t argmin = 0, argmax = 0;
};

// One incremental pass; rows, when given, receive every k in [2, k_max].
PowerLawReport power_law_scan(std::uint64_t k_max, const GoldenCtx& ctx,
                              std::vector<PowerLawRow>* rows = nullptr);

}  // namespace sudler
