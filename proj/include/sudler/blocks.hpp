#pragma once

// Deterministic block parallelism. A range is cut into blocks of a fixed
// size that does not depend on the worker count, each block is evaluated on
// its own, and block results are merged by a fixed pairwise tree. Output is
// therefore bit-identical for any number of workers.

#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace sudler::blocks {

inline constexpr std::uint64_t kBlockSize = std::uint64_t{1} << 14;

struct Range {
  std::uint64_t begin;  // inclusive
  std::uint64_t end;    // exclusive
};

inline std::vector<Range> split(std::uint64_t begin, std::uint64_t end,
                                std::uint64_t block = kBlockSize) {
  std::vector<Range> out;
  for (std::uint64_t b = begin; b < end; b += block) out.push_back({b, b + block < end ? b + block : end});
  return out;
}

// Runs fn(i) for i in [0, count) on up to `workers` threads. If several calls
// throw, the exception of the lowest index is rethrown.
template <class F>
void for_each_index(std::size_t count, int workers, F&& fn) {
  if (count == 0) return;
  std::size_t nthreads = workers < 1 ? 1 : static_cast<std::size_t>(workers);
  if (nthreads > count) nthreads = count;
  std::vector<std::exception_ptr> errors(count);
  if (nthreads == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
          failed.store(true);
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(nthreads - 1);
    for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Evaluates fn(range) for every block of [begin, end) and returns the
// results in block order.
template <class T, class F>
std::vector<T> map_blocks(std::uint64_t begin, std::uint64_t end, int workers, F&& fn,
                          std::uint64_t block = kBlockSize) {
  std::vector<Range> ranges = split(begin, end, block);
  std::vector<T> out(ranges.size());
  for_each_index(ranges.size(), workers, [&](std::size_t i) { out[i] = fn(ranges[i]); });
  return out;
}

// Fixed pairwise tree: ((v0 v1) (v2 v3)) ..., odd tails carried up unchanged.
template <class T, class Op>
T tree_reduce(std::vector<T> v, Op&& op, T identity) {
  if (v.empty()) return identity;
  while (v.size() > 1) {
    std::size_t half = v.size() / 2;
    std::vector<T> next;
    next.reserve(half + 1);
    for (std::size_t i = 0; i < half; ++i) next.push_back(op(v[2 * i], v[2 * i + 1]));
    if (v.size() % 2) next.push_back(std::move(v.back()));
    v = std::move(next);
  }
  return std::move(v.front());
}

}  // namespace sudler::blocks
