#pragma once

// The invariant suite behind `sudler verify`: every module's properties as a
// table of checks, each tagged with the statement it exercises.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sudler/golden.hpp"

namespace sudler {

enum class CheckStatus {
  Pass,
  Fail,
  // The property as literally stated does not hold and the reason is
  // understood (a slip in the stated form); the corrected form is checked in
  // the same row. Does not fail the suite.
  Deviates,
  Info,  // a reported measurement with no pass/fail semantics
};

const char* status_name(CheckStatus s);

struct CheckRow {
  std::string module;
  std::string name;
  std::string anchor;  // the lemma, identity or bound exercised
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
  double seconds = 0;
};

struct VerifyReport {
  std::vector<CheckRow> rows;
  bool passed() const;  // no Fail rows
  std::size_t count(CheckStatus s) const;
};

enum class VerifyLevel { Quick, Full };

VerifyLevel parse_level(const std::string& s);

// Runs the suite; `on_row` (optional) sees each row as soon as it is done.
VerifyReport run_verify(VerifyLevel level, const GoldenCtx& ctx, std::uint64_t seed,
                        const std::function<void(const CheckRow&)>& on_row = {});

std::string format_row(const CheckRow& row);

}  // namespace sudler
