#pragma once

// The Sudler product P_k = prod_{r=1}^{k} |2 sin(pi r omega)|, its Fibonacci
// subsequence Q_n = P_{F_n}, and the factorisation Q_n = A_n B_n C_n into a
// boundary factor, a perturbation factor and a square-correction factor.

#include <cstdint>
#include <vector>

#include "sudler/golden.hpp"

namespace sudler {

struct ProductResult {
  std::uint64_t k = 0;     // number of factors
  DoubleDouble log_value;  // natural log of the product
  double value = 0.0;      // exp(log_value), 0 for a vanishing product
  double err = 0.0;        // bound on |error of log_value|
};

ProductResult make_product_result(std::uint64_t k, const DoubleDouble& log_value, double err);

ProductResult sudler_product(std::uint64_t k, const GoldenCtx& ctx);

// prod_{r=1}^{n} |2 sin(pi r p/q)| from exact residues rp mod q; 0 once n >= q.
// DomainError unless 0 < p < q and gcd(p, q) = 1.
double rational_sudler_product(long long p, long long q, long long n);

// Q_n = P_{F_n}, n >= 1.
ProductResult fibonacci_product(int n, const GoldenCtx& ctx);

// 2 F_n sin(pi omega^n).
ProductResult boundary_factor(int n, const GoldenCtx& ctx);
// prod_{t=1}^{F_n-1} s(n,t) / (2 sin(pi t/F_n)).
ProductResult perturbation_factor(int n, const GoldenCtx& ctx);
// prod_{t=1}^{F_n-1} (1 - h(n,t)), the first-order model of the above.
ProductResult perturbation_factor_star(int n, const GoldenCtx& ctx);
// Generalised product over 1 <= t <= (F_n - 1)/2 of 1 - s(n,0)^2/s(n,t)^2.
// This pairs t with F_n - t exactly, so Q_n = A_n B_n C_n holds identically.
ProductResult square_correction_factor(int n, const GoldenCtx& ctx);
// The same product taken up to F_n/2 instead; differs by 1 + O(omega^{2n}).
ProductResult square_correction_factor_upper_half(int n, const GoldenCtx& ctx);

struct LimitProduct {
  std::uint64_t terms = 0;
  DoubleDouble log_value;
  double value = 0.0;
  double squared = 0.0;
  double min_partial = 0.0;
  double max_partial = 0.0;
  double first_inverse_square = 0.0;  // 1/u_1^2
  bool decreasing = true;             // every factor in (0, 1)
  double err = 0.0;
};

// prod_{t=1}^{T} (1 - 1/u_t^2) with u_t = 2 sqrt5 t - 2({t omega} - 1/2),
// the limit of the square-correction factor.
LimitProduct limit_square_correction(std::uint64_t terms, const GoldenCtx& ctx);

struct Decomposition {
  int n = 0;
  ProductResult a, b, c, q;
  DoubleDouble log_residual;     // log Q - (log A + log B + log C)
  double residual = 0.0;         // Q - A B C
  double relative_residual = 0.0;  // |Q - A B C| / Q
  double err = 0.0;              // combined error budget of the four logs
};

Decomposition decompose(int n, const GoldenCtx& ctx);

// P_{F_n - 1} / F_n for n >= 2 (equal to Q_n / A_n).
ProductResult predecessor_ratio(int n, const GoldenCtx& ctx);

struct ProfileRow {
  std::uint64_t k;
  double value;
  double log_value;
};

// P_k for k = 1, 1 + stride, ... <= F_{n_max}, in one incremental pass.
std::vector<ProfileRow> profile(int n_max, std::uint64_t stride, const GoldenCtx& ctx);

}  // namespace sudler
