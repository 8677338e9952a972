#include <doctest.h>

#include <random>

#include "sudler/errors.hpp"
#include "sudler/fibcore.hpp"

using namespace sudler;

TEST_CASE("table values and identities") {
  CHECK(fib(0) == 0);
  CHECK(fib(1) == 1);
  CHECK(fib(2) == 1);
  CHECK(fib(30) == 832040);
  CHECK(fib(100) == BigInt("354224848179261915075"));
  CHECK(fib_u64(93) == 12200160415121876738ull);
  CHECK_THROWS_AS(fib(-1), DomainError);
  for (long n = 1; n < 300; ++n) {
    BigInt cassini = fib(n + 1) * fib(n - 1) - fib(n) * fib(n);
    CHECK(cassini == ((n % 2) ? -1 : 1));
  }
  CHECK(FibTable::global().self_check());
}

TEST_CASE("floor and Zeckendorf round trip") {
  CHECK(fib_floor(BigInt(0)).index == 0);
  CHECK(fib_floor(BigInt(1)).index == 2);
  CHECK(fib_floor(BigInt(100)).value == 89);
  ZeckRep z = zeckendorf(std::uint64_t{100});
  CHECK(z.indices() == std::vector<int>{11, 6, 4});
  CHECK(z.length == 3);
  CHECK(zeckendorf(std::uint64_t{0}).length == 0);

  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    BigInt n = BigInt(rng()) * BigInt(rng()) + BigInt(i);
    ZeckRep r = zeckendorf(n);
    CHECK(r.well_formed());
    CHECK(r.reconstruct() == n);
    FibLengthBounds b = fib_length_bounds(n == 0 ? BigInt(1) : n);
    if (n > 0) {
      CHECK(r.m <= b.index_bound);
      CHECK(r.length <= b.length_bound);
    }
  }
  for (std::uint64_t n = 1; n <= 5000; ++n) REQUIRE(zeckendorf(n).reconstruct() == BigInt(n));
}

TEST_CASE("modular inverse of the predecessor") {
  CHECK(fib_mod_inverse(1) == 0);
  CHECK(fib_mod_inverse(2) == 0);
  for (long n = 3; n <= 80; ++n) {
    BigInt f = fib(n), g = fib_mod_inverse(n);
    CHECK(g >= 0);
    CHECK(g < f);
    CHECK((g * fib(n - 1)) % f == 1);
    CHECK(g == ((n % 2 == 0) ? fib(n - 1) : BigInt(f - fib(n - 1))));
  }
}
