#pragma once

#include <cstdint>
#include <vector>

#include "mvstream/solver.hpp"

namespace mvstream {

struct OracleOptions {
  /// Restrict the search to plans whose selected span covers the window
  /// (leftmost view <= U_L, rightmost >= U_R). When off, non-spanning plans
  /// are admitted and scored with one-sided synthesis at the uncovered
  /// edges, which quantifies what the coverage restriction costs.
  bool require_coverage = true;
  /// Enumeration guard: product of (rates per view + 1) over all views.
  std::uint64_t max_combinations = 10'000'000;
  /// Collect one log row per enumerated non-empty plan.
  bool collect_log = false;
};

struct OracleRow {
  DownloadPlan plan;
  bool within_budget = false;
  bool covers_window = false;
  double distortion = 1.0;  // evaluated only for admissible plans
};

struct OracleResult {
  SolveResult best;
  std::uint64_t enumerated = 0;      // combinations visited, empty set included
  std::uint64_t admissible = 0;      // plans that passed budget + coverage rules
  std::vector<OracleRow> log;
};

/// Exhaustive minimizer over every subset of representations with at most
/// one rate per view. Ground truth for the solvers on small instances; the
/// visit count is asserted against the closed-form product by callers.
/// Throws std::length_error when the instance exceeds max_combinations.
OracleResult solve_exhaustive(const Catalog& catalog, const VideoProfile& profile,
                              const NavigationWindow& window, double budget_kbps,
                              const OracleOptions& options = {});

}  // namespace mvstream
