#include "lastmile/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "lastmile/errors.hpp"

namespace lastmile {

namespace {

void validate_costs(const Matrix& costs) {
  require_square(costs, "cost matrix");
  if (costs.rows() == 0) throw InvalidInput("cost matrix is empty");
  if (!costs.all_finite()) throw InvalidInput("cost matrix has non-finite entries");
}

}  // namespace

double tour_cost(const Matrix& costs, const std::vector<std::size_t>& order) {
  const std::size_t n = order.size();
  if (n == 0) throw InvalidInput("empty tour order");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += costs(order[i], order[(i + 1) % n]);
  return total;
}

Tour solve_exact(const Matrix& costs) {
  validate_costs(costs);
  const std::size_t n = costs.rows();
  if (n > kExactSolveMaxNodes)
    throw SizeExceeded("exact solver limited to " + std::to_string(kExactSolveMaxNodes) +
                       " nodes, got " + std::to_string(n));
  if (n == 1) return {{0}, tour_cost(costs, {0})};

  // comp[mask][cur]: cost of the cheapest path that starts at cur, visits
  // exactly the nodes in mask (bit i-1 = node i), and ends at node 0.
  const std::size_t m = n - 1;
  const std::size_t full = (std::size_t{1} << m) - 1;
  std::vector<double> comp((full + 1) * n, 0.0);
  const auto at = [&](std::size_t mask, std::size_t cur) -> double& {
    return comp[mask * n + cur];
  };

  for (std::size_t cur = 0; cur < n; ++cur) at(0, cur) = costs(cur, 0);
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t cur = 0; cur < n; ++cur) {
      if (cur != 0 && (mask & (std::size_t{1} << (cur - 1)))) continue;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 1; j < n; ++j) {
        const std::size_t bit = std::size_t{1} << (j - 1);
        if (!(mask & bit)) continue;
        const double cand = costs(cur, j) + at(mask ^ bit, j);
        if (cand < best) best = cand;
      }
      at(mask, cur) = best;
    }
  }

  // Reconstruct by re-testing the recurrence; taking the first j that
  // attains the stored optimum yields the lexicographically smallest
  // optimal order. Comparisons are exact: each table value was assigned
  // from one of the candidate expressions being re-evaluated here.
  std::vector<std::size_t> order;
  order.reserve(n);
  order.push_back(0);
  std::size_t mask = full;
  std::size_t cur = 0;
  while (mask != 0) {
    for (std::size_t j = 1; j < n; ++j) {
      const std::size_t bit = std::size_t{1} << (j - 1);
      if (!(mask & bit)) continue;
      if (costs(cur, j) + at(mask ^ bit, j) == at(mask, cur)) {
        order.push_back(j);
        mask ^= bit;
        cur = j;
        break;
      }
    }
  }
  const double cost = tour_cost(costs, order);
  return {std::move(order), cost};
}

namespace {

// Shared state of one anytime run. Evaluations are counted per candidate
// move so a fixed iteration cap reproduces the same tour everywhere.
struct AnytimeRun {
  const Matrix& c;
  std::uint64_t evals = 0;
  std::uint64_t max_evals;
  double max_seconds;
  std::chrono::steady_clock::time_point start;
  bool out_of_budget = false;

  explicit AnytimeRun(const Matrix& costs, const SolveBudget& budget)
      : c(costs),
        max_evals(budget.max_iterations),
        max_seconds(budget.max_seconds),
        start(std::chrono::steady_clock::now()) {}

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  // True while budget remains; charges one evaluation.
  bool charge() {
    if (out_of_budget) return false;
    if (max_evals > 0 && evals >= max_evals) {
      out_of_budget = true;
      return false;
    }
    ++evals;
    if (max_seconds > 0.0 && (evals & 0xfffu) == 0 && elapsed() >= max_seconds)
      out_of_budget = true;
    return !out_of_budget;
  }
};

std::vector<std::size_t> nearest_neighbor(const Matrix& c) {
  const std::size_t n = c.rows();
  std::vector<std::size_t> order;
  order.reserve(n);
  std::vector<bool> used(n, false);
  order.push_back(0);
  used[0] = true;
  for (std::size_t step = 1; step < n; ++step) {
    const std::size_t cur = order.back();
    std::size_t pick = n;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < n; ++j) {
      if (used[j]) continue;
      if (c(cur, j) < best) {
        best = c(cur, j);
        pick = j;
      }
    }
    order.push_back(pick);
    used[pick] = true;
  }
  return order;
}

// Relocate segments of length 1..3, direction preserved. First improving
// move is applied. Returns true when a move was applied; sets *exhausted
// when the scan completed with budget to spare.
bool or_opt_pass(AnytimeRun& run, std::vector<std::size_t>& order, double& cost) {
  const std::size_t n = order.size();
  const auto& c = run.c;
  for (std::size_t len = 1; len <= 3 && len + 1 < n; ++len) {
    for (std::size_t i = 1; i + len <= n; ++i) {
      const std::size_t prev = order[i - 1];
      const std::size_t first = order[i];
      const std::size_t last = order[i + len - 1];
      const std::size_t next = order[(i + len) % n];
      const double removal = c(prev, next) - c(prev, first) - c(last, next);
      // Insert the segment between order[j] and order[j+1].
      for (std::size_t j = 0; j < n; ++j) {
        if (j + 1 >= i && j <= i + len - 1) continue;
        if (!run.charge()) return false;
        const std::size_t u = order[j];
        const std::size_t v = order[(j + 1) % n];
        const double delta = removal + c(u, first) + c(last, v) - c(u, v);
        if (delta < -1e-12) {
          std::vector<std::size_t> seg(order.begin() + i, order.begin() + i + len);
          order.erase(order.begin() + i, order.begin() + i + len);
          const std::size_t pos = (j < i) ? j + 1 : j + 1 - len;
          order.insert(order.begin() + pos, seg.begin(), seg.end());
          cost += delta;
          return true;
        }
      }
    }
  }
  return false;
}

// 2-opt with the reversed segment recomputed in full: reversal flips arc
// directions, so asymmetric matrices get the honest delta.
bool two_opt_pass(AnytimeRun& run, std::vector<std::size_t>& order, double& cost) {
  const std::size_t n = order.size();
  const auto& c = run.c;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!run.charge()) return false;
      const std::size_t a = order[i - 1];
      const std::size_t b = order[i];
      const std::size_t e = order[j];
      const std::size_t f = order[(j + 1) % n];
      double before = c(a, b) + c(e, f);
      double after = c(a, e) + c(b, f);
      for (std::size_t k = i; k < j; ++k) {
        before += c(order[k], order[k + 1]);
        after += c(order[k + 1], order[k]);
      }
      if (after - before < -1e-12) {
        std::reverse(order.begin() + i, order.begin() + j + 1);
        cost += after - before;
        return true;
      }
    }
  }
  return false;
}

}  // namespace

Tour solve_anytime(const Matrix& costs, const SolveBudget& budget, std::uint64_t seed,
                   const ImprovementCallback& on_improve) {
  validate_costs(costs);
  if (budget.max_iterations == 0 && budget.max_seconds <= 0.0)
    throw InvalidInput("solve budget needs a positive iteration cap or deadline");
  const std::size_t n = costs.rows();
  if (n <= 2) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Tour t{std::move(order), 0.0};
    t.cost = tour_cost(costs, t.order);
    if (on_improve) on_improve(t.order, t.cost, 0.0);
    return t;
  }

  AnytimeRun run(costs, budget);
  std::mt19937_64 rng(seed);

  std::vector<std::size_t> best = nearest_neighbor(costs);
  double best_cost = tour_cost(costs, best);
  if (on_improve) on_improve(best, best_cost, run.elapsed());

  std::vector<std::size_t> cur = best;
  double cur_cost = best_cost;
  while (!run.out_of_budget) {
    bool improved = true;
    while (improved && !run.out_of_budget) {
      improved = or_opt_pass(run, cur, cur_cost);
      if (!improved && !run.out_of_budget) improved = two_opt_pass(run, cur, cur_cost);
      if (cur_cost < best_cost) {
        best = cur;
        best_cost = cur_cost;
        if (on_improve) on_improve(best, best_cost, run.elapsed());
      }
    }
    if (run.out_of_budget) break;
    // Local optimum: restart from a fresh random order.
    std::shuffle(cur.begin() + 1, cur.end(), rng);
    cur_cost = tour_cost(costs, cur);
    if (cur_cost < best_cost) {
      best = cur;
      best_cost = cur_cost;
      if (on_improve) on_improve(best, best_cost, run.elapsed());
    }
  }

  // Costs drift under incremental deltas; report the canonical walk.
  const double final_cost = tour_cost(costs, best);
  return {std::move(best), final_cost};
}

Tour solve(const Matrix& costs, const SolveBudget& budget, std::uint64_t seed) {
  validate_costs(costs);
  if (costs.rows() <= kExactSolveMaxNodes) return solve_exact(costs);
  return solve_anytime(costs, budget, seed);
}

}  // namespace lastmile
