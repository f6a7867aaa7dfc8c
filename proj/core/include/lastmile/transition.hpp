#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lastmile/matrix.hpp"
#include "lastmile/types.hpp"

namespace lastmile {

/// Per-rating multiplicities for transition counting. A route of quality q
/// contributes `weight(q)` to each of its zone adjacencies.
struct QualityWeights {
  double high = 3.0;
  double medium = 2.0;
  double low = 1.0;

  double weight(Quality q) const;
};

/// Row-stochastic zone transition model. p(i, j) is the estimated
/// probability that zone j is served immediately after zone i; every entry
/// is at least `floor`.
struct TransitionMatrix {
  ZoneIndex zone_index;
  Matrix p;
  double floor = 1e-6;
};

/// Weighted adjacency counts over the zone sequences of the given routes,
/// including each sequence's closing arc back to the station when
/// `include_return_arc` is set. Routes without labels are skipped.
Matrix count_transitions(const std::vector<RoutingInstance>& instances,
                         const ZoneIndex& zones, const QualityWeights& weights,
                         bool include_return_arc = true);

/// Rescales each row to sum to 1 with every entry at least `floor`. Zero
/// rows become uniform. Throws InvalidInput when floor * cols >= 1.
Matrix normalize_rows(const Matrix& counts, double floor = 1e-6);

/// Elementwise -log(p). Requires strictly positive entries.
Matrix neg_log(const Matrix& p);

/// Counting followed by normalization.
TransitionMatrix estimate_transitions(const std::vector<RoutingInstance>& instances,
                                      const ZoneIndex& zones,
                                      const QualityWeights& weights = {},
                                      double floor = 1e-6,
                                      bool include_return_arc = true);

/// Rows and columns of `t.p` restricted to `zones`, in `zones` order. Rows
/// are not re-normalized; unseen pairs stay at the floor. Every requested
/// zone must exist in `t.zone_index`.
Matrix slice_transitions(const TransitionMatrix& t, const ZoneIndex& zones);

std::string transition_to_json(const TransitionMatrix& t);
TransitionMatrix transition_from_json(const std::string& text);

}  // namespace lastmile
