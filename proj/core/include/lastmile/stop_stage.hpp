#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "lastmile/matrix.hpp"
#include "lastmile/tsp.hpp"
#include "lastmile/types.hpp"
#include "lastmile/zone_stage.hpp"

namespace lastmile {

/// Relation between the zone ranks of two consecutive stops. Exactly one
/// category holds for any rank pair; `far` covers |rank_j - rank_i| >= 3.
enum class PenaltyCategory { same, next, next2, prev, prev2, far };

inline constexpr std::size_t kPenaltyCategories = 6;
inline constexpr std::size_t kStopFeatureCount = 7;

PenaltyCategory classify(std::size_t oi, std::size_t oj);

/// Weight slot (1..6) of a category inside a stop-stage WeightVector.
std::size_t weight_slot(PenaltyCategory c);

/// o[i] = rank of stop i's zone under the given ordering; o[0] = 0.
std::vector<std::size_t> order_index_of(const RoutingInstance& inst, const ZoneIndex& zi,
                                        const ZoneOrdering& zo);

/// c[i][j] = w[0] * travel_time[i][j] + w[slot(classify(o[i], o[j]))].
/// Diagonal is 0.
Matrix penalty_cost(const RoutingInstance& inst, const std::vector<std::size_t>& o,
                    const WeightVector& w);

/// [total travel time, #same, #next, #next2, #prev, #prev2, #far] over the
/// tour's arcs including the closing arc. dot(w, features) reproduces the
/// tour's penalized cost.
std::vector<double> stop_feature_vector(const RoutingInstance& inst,
                                        const std::vector<std::size_t>& o, const Tour& t);

/// Stage 2: solve the stop-level TSP under the penalized cost.
Tour order_stops(const RoutingInstance& inst, const std::vector<std::size_t>& o,
                 const WeightVector& w, const SolveBudget& budget,
                 std::uint64_t seed = 0);

/// Mean percentage of arcs per category across the routes of one quality
/// label, with the far category split by direction. Percentages are per
/// route (arc count incl. the closing arc) and then averaged.
struct ViolationRow {
  std::string label;
  std::size_t routes = 0;
  double same = 0.0;
  double next = 0.0;
  double next2 = 0.0;
  double next3plus = 0.0;
  double prev = 0.0;
  double prev2 = 0.0;
  double prev3plus = 0.0;
};

/// Classifies every arc of every labeled route against the route's own
/// historical zone ordering. Requires labels and actual sequences; throws
/// InvalidInput on empty input.
std::vector<ViolationRow> violation_report(const std::vector<RoutingInstance>& instances);

/// CSV with header: label,routes,same,next,next2,next3plus,prev,prev2,prev3plus.
std::string violation_report_csv(const std::vector<ViolationRow>& rows);

}  // namespace lastmile
