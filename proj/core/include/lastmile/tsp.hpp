#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>

#include "lastmile/matrix.hpp"
#include "lastmile/types.hpp"

namespace lastmile {

/// Cap on exact (Held-Karp) problem size; memory grows as n * 2^n.
inline constexpr std::size_t kExactSolveMaxNodes = 13;

/// Budget for the anytime solver. At least one bound must be positive; the
/// solver stops at whichever is hit first. Iterations are candidate-move
/// evaluations, so equal caps give identical tours across runs and hosts.
struct SolveBudget {
  std::uint64_t max_iterations = 0;
  double max_seconds = 0.0;

  static SolveBudget iterations(std::uint64_t n) { return {n, 0.0}; }
  static SolveBudget seconds(double s) { return {0, s}; }
};

/// Invoked whenever the incumbent improves: (tour, cost, elapsed seconds).
using ImprovementCallback =
    std::function<void(const std::vector<std::size_t>&, double, double)>;

/// Cost of the depot-rooted circuit visiting `order`, including the closing
/// arc back to order[0]. Canonical left-to-right accumulation; every solver
/// reports costs through this walk.
double tour_cost(const Matrix& costs, const std::vector<std::size_t>& order);

/// Held-Karp over all n nodes, depot fixed at 0. Ties resolve to the
/// lexicographically smallest order. Throws SizeExceeded above
/// kExactSolveMaxNodes.
Tour solve_exact(const Matrix& costs);

/// Nearest-neighbor construction plus 2-opt / or-opt descent under random
/// restarts. Deterministic for a fixed (seed, iteration cap) pair.
Tour solve_anytime(const Matrix& costs, const SolveBudget& budget,
                   std::uint64_t seed = 0,
                   const ImprovementCallback& on_improve = nullptr);

/// Exact when the problem fits under kExactSolveMaxNodes, anytime otherwise.
Tour solve(const Matrix& costs, const SolveBudget& budget, std::uint64_t seed = 0);

}  // namespace lastmile
