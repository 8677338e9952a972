#pragma once

// Fibonacci numbers (F_0 = 0, F_1 = F_2 = 1), Zeckendorf representations and
// the modular inverse of F_{n-1} modulo F_n.

#include <gmpxx.h>

#include <cstdint>
#include <deque>
#include <shared_mutex>
#include <vector>

namespace sudler {

using BigInt = mpz_class;

// Lazily grown, append-only table of Fibonacci numbers. Reads from many
// threads are safe; growth takes an exclusive lock.
class FibTable {
 public:
  FibTable();

  static FibTable& global();

  // F_n, extending the table if needed. Throws DomainError for n < 0.
  BigInt get(long n);
  std::size_t size() const;

  // Recurrence, Cassini identity and parity law over every cached index.
  bool self_check() const;

 private:
  void extend_to(long n);

  mutable std::shared_mutex mu_;
  std::deque<BigInt> values_;
};

BigInt fib(long n);
// F_n as a 64-bit integer, n <= 93.
std::uint64_t fib_u64(int n);

struct FibFloor {
  int index = 0;
  BigInt value;
};

// Largest F_i <= n, highest index on ties (so F(1) = F_2 and F(0) = F_0).
FibFloor fib_floor(const BigInt& n);

struct ZeckRep {
  // bits[s-1] holds b_s for s = 1..m.
  std::vector<std::uint8_t> bits;
  int m = 0;       // index of the highest term, 0 for n = 0
  int length = 0;  // number of terms

  bool bit(int s) const { return s >= 1 && s <= m && bits[s - 1]; }
  // Indices s with b_s = 1, highest first.
  std::vector<int> indices() const;
  BigInt reconstruct() const;
  // No two adjacent ones, b_m = 1, length consistent.
  bool well_formed() const;
};

ZeckRep zeckendorf(const BigInt& n);
ZeckRep zeckendorf(std::uint64_t n);

struct FibLengthBounds {
  long index_bound = 0;   // bound on the highest Zeckendorf index m(n)
  long length_bound = 0;  // bound on the Fibonacci length
};

// floor((ln n + 1)/ln(1+omega)) and floor((ln n + 1)/ln(2+omega)); n >= 1.
FibLengthBounds fib_length_bounds(const BigInt& n);

// [(-1)^n F_{n-1}] mod F_n; 0 for n = 1, 2 where the modulus is 1.
BigInt fib_mod_inverse(long n);

}  // namespace sudler
