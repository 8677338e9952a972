#include "sudler/fibcore.hpp"

#include <cmath>
#include <mutex>
#include <string>

#include "sudler/errors.hpp"

namespace sudler {

FibTable::FibTable() {
  values_.push_back(0);
  values_.push_back(1);
}

FibTable& FibTable::global() {
  static FibTable table;
  return table;
}

void FibTable::extend_to(long n) {
  std::unique_lock lock(mu_);
  while (static_cast<long>(values_.size()) <= n) {
    std::size_t k = values_.size();
    values_.push_back(values_[k - 1] + values_[k - 2]);
  }
}

BigInt FibTable::get(long n) {
  if (n < 0) throw DomainError("Fibonacci index must be non-negative, got " + std::to_string(n));
  {
    std::shared_lock lock(mu_);
    if (n < static_cast<long>(values_.size())) return values_[n];
  }
  extend_to(n);
  std::shared_lock lock(mu_);
  return values_[n];
}

std::size_t FibTable::size() const {
  std::shared_lock lock(mu_);
  return values_.size();
}

bool FibTable::self_check() const {
  std::shared_lock lock(mu_);
  if (values_[0] != 0 || values_[1] != 1) return false;
  for (std::size_t n = 1; n + 1 < values_.size(); ++n) {
    if (values_[n + 1] != values_[n] + values_[n - 1]) return false;
    BigInt cassini = values_[n + 1] * values_[n - 1] - values_[n] * values_[n];
    if (cassini != (n % 2 ? -1 : 1)) return false;
    if (mpz_even_p(values_[n].get_mpz_t()) != (n % 3 == 0)) return false;
  }
  return true;
}

BigInt fib(long n) { return FibTable::global().get(n); }

std::uint64_t fib_u64(int n) {
  if (n < 0 || n > 93) throw DomainError("F_n does not fit 64 bits for n = " + std::to_string(n));
  static const std::vector<std::uint64_t> small = [] {
    std::vector<std::uint64_t> v{0, 1};
    for (int i = 2; i <= 93; ++i) v.push_back(v[i - 1] + v[i - 2]);
    return v;
  }();
  return small[n];
}

FibFloor fib_floor(const BigInt& n) {
  if (n < 0) throw DomainError("fib_floor needs a non-negative argument");
  if (n == 0) return {0, 0};
  // Walk up until F_{i+1} > n; the tie F_1 = F_2 resolves to the higher index.
  long i = 2;
  while (fib(i + 1) <= n) ++i;
  return {static_cast<int>(i), fib(i)};
}

std::vector<int> ZeckRep::indices() const {
  std::vector<int> out;
  for (int s = m; s >= 1; --s)
    if (bits[s - 1]) out.push_back(s);
  return out;
}

BigInt ZeckRep::reconstruct() const {
  BigInt total = 0;
  for (int s = 1; s <= m; ++s)
    if (bits[s - 1]) total += fib(s);
  return total;
}

bool ZeckRep::well_formed() const {
  if (static_cast<int>(bits.size()) != m) return false;
  if (m == 0) return length == 0;
  if (!bits[m - 1]) return false;
  int count = 0;
  for (int s = 1; s <= m; ++s) {
    if (bits[s - 1]) {
      ++count;
      if (s < m && bits[s]) return false;
    }
  }
  return count == length && !bits[0] && length <= m / 2;
}

ZeckRep zeckendorf(const BigInt& n) {
  if (n < 0) throw DomainError("zeckendorf needs a non-negative argument");
  ZeckRep rep;
  BigInt rest = n;
  while (rest > 0) {
    FibFloor f = fib_floor(rest);
    if (rep.m == 0) {
      rep.m = f.index;
      rep.bits.assign(rep.m, 0);
    }
    rep.bits[f.index - 1] = 1;
    ++rep.length;
    rest -= f.value;
  }
  return rep;
}

ZeckRep zeckendorf(std::uint64_t n) {
  ZeckRep rep;
  if (n == 0) return rep;
  int i = 2;
  while (i < 93 && fib_u64(i + 1) <= n) ++i;
  rep.m = i;
  rep.bits.assign(rep.m, 0);
  for (; n > 0 && i >= 2; --i) {
    if (fib_u64(i) <= n) {
      rep.bits[i - 1] = 1;
      ++rep.length;
      n -= fib_u64(i);
    }
  }
  return rep;
}

FibLengthBounds fib_length_bounds(const BigInt& n) {
  if (n < 1) throw DomainError("fib_length_bounds needs n >= 1");
  long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, n.get_mpz_t());
  double ln_n = std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
  const double omega = (std::sqrt(5.0) - 1.0) / 2.0;
  return {static_cast<long>(std::floor((ln_n + 1.0) / std::log(1.0 + omega))),
          static_cast<long>(std::floor((ln_n + 1.0) / std::log(2.0 + omega)))};
}

BigInt fib_mod_inverse(long n) {
  if (n < 1) throw DomainError("fib_mod_inverse needs n >= 1");
  BigInt mod = fib(n);
  if (mod == 1) return 0;
  BigInt v = fib(n - 1);
  if (n % 2) v = -v;
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t());
  return r;
}

}  // namespace sudler
