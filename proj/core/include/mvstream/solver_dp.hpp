#pragma once

#include <cstdint>
#include <vector>

#include "mvstream/solver.hpp"

namespace mvstream {

struct DpStats {
  std::size_t states = 0;        // memo entries touched
  std::uint64_t transitions = 0; // candidate (next view, rate) evaluations
  std::uint64_t edge_sums = 0;   // cached interval-distortion sums computed
};

/// Exact representation selection by dynamic programming over
/// (view, rate, residual budget). Minimizes the mean window distortion
/// subject to the download budget, under one rate per view and full window
/// coverage by the selected span. The budget axis is quantized to the gcd of
/// all catalog rates (and the depth overhead), so residual-budget arithmetic
/// is exact; the budget itself is floored to that grid.
SolveResult solve_optimal(const Catalog& catalog, const VideoProfile& profile,
                          const NavigationWindow& window, double budget_kbps,
                          DpStats* stats = nullptr);

/// One timing sample of the DP solver on a synthetic instance.
struct ProbeSample {
  int num_views = 0;
  int num_rates = 0;
  double seconds = 0.0;
  std::uint64_t transitions = 0;
};

struct ProbeSize {
  int num_views = 0;
  int num_rates = 0;
};

/// Times solve_optimal across synthetic instances of the given sizes
/// (full-grid window, budget at half the catalog maximum). Used by the
/// scaling benchmarks and the complexity sanity checks.
std::vector<ProbeSample> complexity_probe(const std::vector<ProbeSize>& sizes,
                                          int repeats = 3);

}  // namespace mvstream
