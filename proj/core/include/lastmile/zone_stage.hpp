#pragma once

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "lastmile/matrix.hpp"
#include "lastmile/transition.hpp"
#include "lastmile/tsp.hpp"
#include "lastmile/types.hpp"

namespace lastmile {

/// Zone centroids and the distance-derived transition probabilities for one
/// instance. Indices follow `zone_index`; the station pseudo-zone sits at 0
/// with the station's own coordinates.
struct ZoneGeometry {
  ZoneIndex zone_index;
  std::vector<double> centroid_lng;
  std::vector<double> centroid_lat;
  /// Pairwise Euclidean centroid distances in degree units, symmetric.
  Matrix d;
  /// Row-stochastic inverted distances: d_prime[i][j] = (1/d[i][j]) / sum_k (1/d[i][k]).
  Matrix d_prime;
};

/// Stage-1 result: the zone visit sequence (station first) and its inverse
/// rank map.
struct ZoneOrdering {
  std::vector<std::size_t> sequence;
  std::vector<std::size_t> rank;
  double cost = 0.0;
};

ZoneOrdering ordering_from_sequence(std::vector<std::size_t> sequence, double cost = 0.0);

/// Centroids are arithmetic means of member-stop coordinates; every zone in
/// `zi` except the station pseudo-zone must have at least one stop.
/// Coincident centroids are floored to 1e-9 degrees before inversion.
ZoneGeometry build_geometry(const RoutingInstance& inst, const ZoneIndex& zi);

/// c[i][j] = -w[0] * ln(d_prime[i][j]) - w[1] * ln(p[i][j]). Diagonal is 0.
Matrix mixed_zone_cost(const Matrix& d_prime, const Matrix& p, const WeightVector& w);

/// Per-arc cost terms of a zone instance, precomputed so the trainer's
/// inference loop only reassembles c = w[0]*neg_log_d + w[1]*neg_log_p.
struct ZoneTerms {
  Matrix neg_log_d;
  Matrix neg_log_p;

  Matrix cost(const WeightVector& w) const;
};

ZoneTerms zone_terms(const Matrix& d_prime, const Matrix& p);

/// Feature vector of a zone tour: [sum of -ln d', sum of -ln p] over the
/// tour's arcs including the closing arc. dot(w, features) reproduces the
/// tour's mixed cost.
std::vector<double> zone_feature_vector(const ZoneTerms& terms, const Tour& t);

/// Stage 1 end to end: slice the corpus-level transition matrix to the
/// instance's zones, assemble the mixed cost, and solve rooted at the
/// station pseudo-zone.
ZoneOrdering order_zones(const RoutingInstance& inst, const ZoneIndex& zi,
                         const ZoneGeometry& g, const TransitionMatrix& p,
                         const WeightVector& w, const SolveBudget& budget,
                         std::uint64_t seed = 0);

}  // namespace lastmile
