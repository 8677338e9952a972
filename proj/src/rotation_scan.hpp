#pragma once

// Block-parallel sums and prefix scans over x_r = {phase + r*omega}. Block
// boundaries are fixed, each block re-anchors its walker exactly, and
// prefixes are offset by block totals added in block order, so every result
// is independent of the worker count.

#include <cstdint>
#include <functional>
#include <vector>

#include "sudler/blocks.hpp"
#include "sudler/golden.hpp"

namespace sudler::detail {

struct Term {
  DoubleDouble value;
  double err = 0.0;
};

struct BlockTotal {
  DoubleDouble sum;
  double err = 0.0;
};

inline BlockTotal merge(const BlockTotal& a, const BlockTotal& b) {
  return {a.sum + b.sum, a.err + b.err};
}

// Sum of term(walker) for r in [a, b).
template <class TermFn>
BlockTotal rotation_sum(const GoldenCtx& ctx, std::uint64_t a, std::uint64_t b,
                        const FixedFrac* phase, TermFn&& term) {
  auto parts = blocks::map_blocks<BlockTotal>(a, b, ctx.workers(), [&](blocks::Range rg) {
    RotationWalker w(ctx, rg.begin, phase);
    BlockTotal acc;
    for (std::uint64_t r = rg.begin; r < rg.end; ++r) {
      if (r != rg.begin) w.advance();
      Term t = term(w);
      acc.sum += t.value;
      acc.err += t.err;
    }
    return acc;
  });
  return blocks::tree_reduce(std::move(parts), merge, BlockTotal{});
}

// Calls visit(block, r, prefix, prefix_err) with prefix = sum_{a <= s <= r}
// term(s), for every r in [a, b). Calls within a block are ordered by r;
// different blocks may run concurrently.
template <class TermFn, class Visit>
BlockTotal rotation_prefix(const GoldenCtx& ctx, std::uint64_t a, std::uint64_t b,
                           const FixedFrac* phase, TermFn&& term, Visit&& visit) {
  std::vector<blocks::Range> ranges = blocks::split(a, b);
  std::vector<BlockTotal> totals(ranges.size());
  blocks::for_each_index(ranges.size(), ctx.workers(), [&](std::size_t i) {
    RotationWalker w(ctx, ranges[i].begin, phase);
    BlockTotal acc;
    for (std::uint64_t r = ranges[i].begin; r < ranges[i].end; ++r) {
      if (r != ranges[i].begin) w.advance();
      Term t = term(w);
      acc.sum += t.value;
      acc.err += t.err;
    }
    totals[i] = acc;
  });
  std::vector<BlockTotal> offsets(ranges.size());
  BlockTotal run;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    offsets[i] = run;
    run = merge(run, totals[i]);
  }
  blocks::for_each_index(ranges.size(), ctx.workers(), [&](std::size_t i) {
    RotationWalker w(ctx, ranges[i].begin, phase);
    BlockTotal acc = offsets[i];
    for (std::uint64_t r = ranges[i].begin; r < ranges[i].end; ++r) {
      if (r != ranges[i].begin) w.advance();
      Term t = term(w);
      acc.sum += t.value;
      acc.err += t.err;
      visit(i, r, acc.sum, acc.err);
    }
  });
  return run;
}

// log|2 sin(pi x_r)|. Throws PrecisionError when the factor cannot be
// certified nonzero; with allow_zero the term is reported through `zero`.
Term log_sine_term(const RotationWalker& w, bool allow_zero = false, bool* zero = nullptr);

// cot(pi x_r), guarded the same way.
Term cot_term(const RotationWalker& w);

}  // namespace sudler::detail
