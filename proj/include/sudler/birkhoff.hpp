#pragma once

// Sums along the golden rotation: centered sine partial sums and their
// Zeckendorf split, the discrepancy sum at convergent denominators, cotangent
// sums and the cotangent profile, the Birkhoff sum 2 log P_k, and the sine
// sum/product identities used by the renormalisation argument.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sudler/golden.hpp"
#include "sudler/product.hpp"

namespace sudler {

// Constant K in |S(n,t)| < K omega^n (ln t + 1).
double partial_sum_constant();

// sum_{r=1}^{t} sin(pi omega^n ({theta + r omega} - 1/2)), summed directly.
Approx centered_sine_sum(int n, std::uint64_t t, const FixedFrac& theta, const GoldenCtx& ctx);

struct SumSeries {
  int n = 0;
  std::vector<DoubleDouble> values;  // values[t-1] = S(n,t), t = 1..t_max
  std::vector<double> errs;          // matching error bounds
};

// All partial sums for t = 1..t_max in one pass.
SumSeries centered_sine_series(int n, std::uint64_t t_max, const FixedFrac& theta,
                               const GoldenCtx& ctx);

// The split S(n,t) = sum_s b_s S(n,F_s)(theta + t_s omega), t_s the sum of
// the Zeckendorf terms above s. Segment sums are memoised on (s, t_s), so
// sweeping many t reuses shared prefixes.
class SplitSineSums {
 public:
  SplitSineSums(int n, const FixedFrac& theta, const GoldenCtx& ctx);

  Approx evaluate(std::uint64_t t);
  std::size_t cached_segments() const { return cache_.size(); }

 private:
  Approx segment(int s, std::uint64_t offset);

  int n_;
  FixedFrac theta_;
  const GoldenCtx& ctx_;
  DoubleDouble wn_;
  std::map<std::pair<int, std::uint64_t>, Approx> cache_;
};

Approx centered_sine_sum_split(int n, std::uint64_t t, const FixedFrac& theta,
                               const GoldenCtx& ctx);

// Phases as fractions of a turn in units of 2^-128.
using Phase = unsigned __int128;
Phase phase_from_double(double x);  // x reduced mod 1
Phase phase_from_fixed(const FixedFrac& f);

// sum_{i=1}^{q} ({theta + i alpha} - 1/2), exact for the given phases.
DoubleDouble discrepancy_sum(std::uint64_t q, Phase alpha, Phase theta);

struct CotSum {
  int n = 0;
  DoubleDouble sum;         // sum_{r=1}^{F_n} cot(pi r omega)
  DoubleDouble normalized;  // omega^n * sum
  double min_distance = 0;  // min_r ||r omega||
  double err = 0;           // bound on |error of sum|
  double lower = 0, upper = 0;  // the enclosure for omega^n * sum
  bool within = false;
};

CotSum cotangent_sum(int n, const GoldenCtx& ctx);

struct CotSquareSum {
  int n = 0;
  DoubleDouble sum;        // sum_{r=1}^{F_n} cot^2(pi r omega)
  double err = 0;
  // Successive upper bounds: the rational-point comparison, the 1/x^2
  // comparison, the stated closed form with F_n^2/6, and the same closed
  // form with the F_n^2/3 that the 1/x^2 comparison actually yields.
  double rational_bound = 0;
  double inverse_square_bound = 0;
  double closed_bound = 0;
  double corrected_bound = 0;
};

CotSquareSum cotangent_square_sum(int n, const GoldenCtx& ctx);

struct CotProfileRow {
  std::uint64_t k;
  double partial;  // (-1)^n sum_{r=1}^{k} cot(pi r omega)
};

std::vector<CotProfileRow> cot_profile(int n, const GoldenCtx& ctx);

// S_k = 2 log P_k.
Approx birkhoff_sum(std::uint64_t k, const GoldenCtx& ctx);

struct LagrangeSum {
  DoubleDouble closed;
  DoubleDouble direct;
};

// sum_{k=1}^{n} sin(theta + k x) and sum_{k=1}^{n} k sin(theta + k x):
// closed forms next to direct summation. DomainError when x is a multiple of
// 2 pi.
LagrangeSum lagrange_sine_sum(double theta, double x, int n);
LagrangeSum lagrange_weighted_sine_sum(double theta, double x, int n);

struct IdentityResult {
  std::string name;
  std::uint64_t checks = 0;
  double max_rel_dev = 0;
  int worst_n = 0;
};

struct IdentityReport {
  int n_max = 0;
  double tolerance = 1e-11;
  std::vector<IdentityResult> results;
  bool passed() const;
};

// Every sine/cosine product and sum identity for 2 <= n <= n_max at
// `samples` random phases per n, plus the evaluations at rational points.
IdentityReport identity_suite(int n_max, std::uint64_t seed, int samples = 20, int workers = 1);

}  // namespace sudler
