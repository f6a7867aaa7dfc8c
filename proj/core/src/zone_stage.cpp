#include "lastmile/zone_stage.hpp"

#include <cmath>

#include "lastmile/errors.hpp"

namespace lastmile {

namespace {

constexpr double kMinCentroidDistance = 1e-9;

}  // namespace

ZoneOrdering ordering_from_sequence(std::vector<std::size_t> sequence, double cost) {
  Tour t{std::move(sequence), cost};
  validate_tour(t, t.order.size());
  ZoneOrdering zo;
  zo.sequence = std::move(t.order);
  zo.cost = cost;
  zo.rank.assign(zo.sequence.size(), 0);
  for (std::size_t k = 0; k < zo.sequence.size(); ++k) zo.rank[zo.sequence[k]] = k;
  return zo;
}

ZoneGeometry build_geometry(const RoutingInstance& inst, const ZoneIndex& zi) {
  const std::size_t m = zi.size();
  if (m == 0) throw InvalidInput("zone index is empty");

  ZoneGeometry g;
  g.zone_index = zi;
  g.centroid_lng.assign(m, 0.0);
  g.centroid_lat.assign(m, 0.0);
  std::vector<std::size_t> members(m, 0);
  for (const Stop& s : inst.stops) {
    const std::size_t z = zi.at(s.zone_id);
    g.centroid_lng[z] += s.lng;
    g.centroid_lat[z] += s.lat;
    ++members[z];
  }
  for (std::size_t z = 0; z < m; ++z) {
    if (members[z] == 0)
      throw InvalidInput("zone '" + zi.id(z) + "' has no stops in route '" +
                         inst.route_id + "'");
    g.centroid_lng[z] /= static_cast<double>(members[z]);
    g.centroid_lat[z] /= static_cast<double>(members[z]);
  }

  g.d = Matrix::square(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double dx = g.centroid_lng[i] - g.centroid_lng[j];
      const double dy = g.centroid_lat[i] - g.centroid_lat[j];
      const double dist = std::max(std::hypot(dx, dy), kMinCentroidDistance);
      g.d(i, j) = dist;
      g.d(j, i) = dist;
    }

  g.d_prime = Matrix::square(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double inv_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) inv_sum += 1.0 / g.d(i, j);
    if (inv_sum == 0.0) continue;
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) g.d_prime(i, j) = (1.0 / g.d(i, j)) / inv_sum;
  }
  return g;
}

Matrix mixed_zone_cost(const Matrix& d_prime, const Matrix& p, const WeightVector& w) {
  return zone_terms(d_prime, p).cost(w);
}

Matrix ZoneTerms::cost(const WeightVector& w) const {
  validate_weights(w, 2);
  const std::size_t m = neg_log_d.rows();
  Matrix c = Matrix::square(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      c(i, j) = w[0] * neg_log_d(i, j) + w[1] * neg_log_p(i, j);
    }
  return c;
}

ZoneTerms zone_terms(const Matrix& d_prime, const Matrix& p) {
  require_square(d_prime, "d_prime");
  require_square(p, "transition slice");
  const std::size_t m = d_prime.rows();
  if (p.rows() != m) throw InvalidInput("d_prime and transition slice differ in size");

  ZoneTerms terms{Matrix::square(m, 0.0), Matrix::square(m, 0.0)};
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      if (!(d_prime(i, j) > 0.0) || !(p(i, j) > 0.0))
        throw InvalidInput("zone probabilities must be strictly positive off-diagonal");
      terms.neg_log_d(i, j) = -std::log(d_prime(i, j));
      terms.neg_log_p(i, j) = -std::log(p(i, j));
    }
  return terms;
}

std::vector<double> zone_feature_vector(const ZoneTerms& terms, const Tour& t) {
  const std::size_t m = terms.neg_log_d.rows();
  validate_tour(t, m);
  std::vector<double> f(2, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t a = t.order[i];
    const std::size_t b = t.order[(i + 1) % m];
    if (a == b) continue;
    f[0] += terms.neg_log_d(a, b);
    f[1] += terms.neg_log_p(a, b);
  }
  return f;
}

ZoneOrdering order_zones(const RoutingInstance& inst, const ZoneIndex& zi,
                         const ZoneGeometry& g, const TransitionMatrix& p,
                         const WeightVector& w, const SolveBudget& budget,
                         std::uint64_t seed) {
  validate_weights(w, 2);
  for (const Stop& s : inst.stops)
    if (!zi.contains(s.zone_id))
      throw InvalidInput("stop '" + s.id + "' lies in zone '" + s.zone_id +
                         "' outside the zone index");
  const std::size_t m = zi.size();
  if (m == 1) return ordering_from_sequence({0}, 0.0);
  if (g.zone_index.size() != m)
    throw InvalidInput("geometry does not match the zone index");

  const Matrix p_sub = slice_transitions(p, zi);
  const Matrix cost = zone_terms(g.d_prime, p_sub).cost(w);
  Tour t = solve(cost, budget, seed);
  return ordering_from_sequence(std::move(t.order), t.cost);
}

}  // namespace lastmile
