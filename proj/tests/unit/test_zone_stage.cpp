#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "lastmile/errors.hpp"
#include "lastmile/transition.hpp"
#include "lastmile/zone_stage.hpp"
#include "oracles.hpp"

using namespace lastmile;

namespace {

// Uniform transition matrix over the given zones; every row sums to 1.
TransitionMatrix uniform_transitions(const ZoneIndex& zones) {
  const std::size_t m = zones.size();
  return {zones, Matrix::square(m, 1.0 / static_cast<double>(m)), 1e-6};
}

}  // namespace

TEST_SUITE("zone") {
  TEST_CASE("centroids are member means, station keeps its own coordinates") {
    auto inst = fixtures::make_instance("r1", {{"Z1", 0, 0}, {"Z1", 2, 2}, {"Z2", 5, 1}},
                                        0.5, 0.25);
    const ZoneIndex zi = instance_zone_index(inst);
    const ZoneGeometry g = build_geometry(inst, zi);
    CHECK(g.centroid_lng[0] == 0.5);
    CHECK(g.centroid_lat[0] == 0.25);
    CHECK(g.centroid_lng[zi.at("Z1")] == 1.0);
    CHECK(g.centroid_lat[zi.at("Z1")] == 1.0);
    CHECK(g.centroid_lng[zi.at("Z2")] == 5.0);
  }

  TEST_CASE("distances are symmetric with zero diagonal; d_prime rows are stochastic") {
    auto inst = fixtures::make_instance(
        "r1", {{"Z1", 1, 0}, {"Z2", 0, 1}, {"Z3", 2, 3}, {"Z4", 4, 1}});
    const ZoneIndex zi = instance_zone_index(inst);
    const ZoneGeometry g = build_geometry(inst, zi);
    const std::size_t m = zi.size();
    for (std::size_t i = 0; i < m; ++i) {
      CHECK(g.d(i, i) == 0.0);
      double sum = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        CHECK(g.d(i, j) == g.d(j, i));
        if (i != j) CHECK(g.d(i, j) > 0.0);
        sum += g.d_prime(i, j);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  TEST_CASE("inverted-distance rows from hand arithmetic") {
    // Station at origin, zones at distance 1 and 3 on the x axis.
    auto inst = fixtures::make_instance("r1", {{"Z1", 1, 0}, {"Z2", 3, 0}});
    const ZoneIndex zi = instance_zone_index(inst);
    const ZoneGeometry g = build_geometry(inst, zi);
    CHECK(g.d_prime(0, zi.at("Z1")) == doctest::Approx(0.75));
    CHECK(g.d_prime(0, zi.at("Z2")) == doctest::Approx(0.25));

    // Equidistant pair splits evenly.
    auto sym = fixtures::make_instance("r2", {{"Z1", 1, 0}, {"Z2", -1, 0}});
    const ZoneIndex zi2 = instance_zone_index(sym);
    const ZoneGeometry g2 = build_geometry(sym, zi2);
    CHECK(g2.d_prime(0, 1) == doctest::Approx(0.5));
    CHECK(g2.d_prime(0, 2) == doctest::Approx(0.5));
  }

  TEST_CASE("coincident centroids are floored, not divided by zero") {
    auto inst = fixtures::make_instance("r1", {{"Z1", 2, 2}, {"Z2", 2, 2}});
    const ZoneIndex zi = instance_zone_index(inst);
    const ZoneGeometry g = build_geometry(inst, zi);
    CHECK(g.d(1, 2) == 1e-9);
    CHECK(g.d_prime.all_finite());
    double sum = 0.0;
    for (std::size_t j = 0; j < 3; ++j) sum += g.d_prime(1, j);
    CHECK(sum == doctest::Approx(1.0));
  }

  TEST_CASE("a zone without stops is rejected") {
    auto inst = fixtures::make_instance("r1", {{"Z1", 1, 0}});
    const ZoneIndex zi({station_zone_id("S"), "Z1", "ZGHOST"});
    CHECK_THROWS_AS(build_geometry(inst, zi), InvalidInput);
  }

  TEST_CASE("mixed cost arithmetic") {
    Matrix d_prime = Matrix::square(2, 0.0);
    d_prime(0, 1) = d_prime(1, 0) = 0.5;
    Matrix p = Matrix::square(2, 0.0);
    p(0, 1) = p(1, 0) = 0.25;

    const Matrix both = mixed_zone_cost(d_prime, p, WeightVector{{1.0, 1.0}});
    CHECK(both(0, 1) == doctest::Approx(2.0794).epsilon(1e-4));

    const Matrix dist_only = mixed_zone_cost(d_prime, p, WeightVector{{1.0, 0.0}});
    CHECK(dist_only(0, 1) == doctest::Approx(std::log(2.0)));
    const Matrix pref_only = mixed_zone_cost(d_prime, p, WeightVector{{0.0, 1.0}});
    CHECK(pref_only(0, 1) == doctest::Approx(std::log(4.0)));
    CHECK(both(0, 0) == 0.0);

    CHECK_THROWS_AS(mixed_zone_cost(d_prime, Matrix::square(3, 0.5), WeightVector{{1, 1}}),
                    InvalidInput);
    CHECK_THROWS_AS(mixed_zone_cost(d_prime, p, WeightVector{{1, 1, 1}}), InvalidInput);
  }

  TEST_CASE("feature vector sums arc terms") {
    Matrix d_prime = Matrix::square(2, 0.0);
    d_prime(0, 1) = d_prime(1, 0) = 0.5;
    Matrix p = Matrix::square(2, 0.0);
    p(0, 1) = p(1, 0) = 0.5;
    const ZoneTerms terms = zone_terms(d_prime, p);
    const auto f = zone_feature_vector(terms, Tour{{0, 1}, 0.0});
    CHECK(f[0] == doctest::Approx(1.386).epsilon(1e-3));
    CHECK(f[1] == doctest::Approx(1.386).epsilon(1e-3));

    // Certain transitions carry no preference cost.
    Matrix sure = Matrix::square(2, 0.0);
    sure(0, 1) = sure(1, 0) = 1.0;
    const auto f2 = zone_feature_vector(zone_terms(d_prime, sure), Tour{{0, 1}, 0.0});
    CHECK(f2[1] == 0.0);
  }

  TEST_CASE("dot(w, features) equals the mixed tour cost") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> wdist(0.0, 2.0);
    for (int rep = 0; rep < 100; ++rep) {
      const std::size_t m = 3 + rep % 6;
      const Matrix p = oracle::random_stochastic(m, rng);
      const Matrix d_prime = oracle::random_stochastic(m, rng);
      const WeightVector w{{wdist(rng), wdist(rng)}};
      const ZoneTerms terms = zone_terms(d_prime, p);
      const Tour t = oracle::random_tour(m, rng);

      const auto f = zone_feature_vector(terms, t);
      const double via_features = w[0] * f[0] + w[1] * f[1];
      const double via_cost = tour_cost(terms.cost(w), t.order);
      CHECK(via_features == doctest::Approx(via_cost).epsilon(1e-12));
      CHECK(std::fabs(via_features - via_cost) <= 1e-9);
    }
  }

  TEST_CASE("ordering a single-zone instance is trivial") {
    auto inst = fixtures::make_instance("r1", {});
    const ZoneIndex zi = instance_zone_index(inst);
    const ZoneGeometry g = build_geometry(inst, zi);
    const ZoneOrdering zo = order_zones(inst, zi, g, uniform_transitions(zi),
                                        WeightVector::zone_default(),
                                        SolveBudget::iterations(10));
    CHECK(zo.sequence == std::vector<std::size_t>{0});
    CHECK(zo.rank == std::vector<std::size_t>{0});
  }

  TEST_CASE("collinear centroids under pure distance weights") {
    // Station, then A at x=1, B at x=2. Both 3-circuits cost the same under
    // -log d_prime (the row normalization cancels over a full circuit), so
    // the lexicographic tie-break keeps the near zone first.
    auto inst = fixtures::make_instance("r1", {{"A", 1, 0}, {"B", 2, 0}});
    const ZoneIndex zi = instance_zone_index(inst);
    const ZoneGeometry g = build_geometry(inst, zi);
    const ZoneOrdering zo = order_zones(inst, zi, g, uniform_transitions(zi),
                                        WeightVector{{1.0, 0.0}},
                                        SolveBudget::iterations(100));
    CHECK(zo.sequence == std::vector<std::size_t>{0, zi.at("A"), zi.at("B")});
    CHECK(zo.rank[0] == 0);
    CHECK(zo.rank[zi.at("A")] == 1);
    CHECK(zo.rank[zi.at("B")] == 2);
  }

  TEST_CASE("uniform preference rows do not change the distance ordering") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> coord(0.0, 10.0);
    for (int rep = 0; rep < 20; ++rep) {
      const std::size_t zones = 3 + rep % 4;
      std::vector<fixtures::StopSpec> stops;
      for (std::size_t z = 0; z < zones; ++z)
        stops.push_back({"Z" + std::to_string(z), coord(rng), coord(rng)});
      auto inst = fixtures::make_instance("r1", stops, coord(rng), coord(rng));
      const ZoneIndex zi = instance_zone_index(inst);
      const ZoneGeometry g = build_geometry(inst, zi);

      const auto budget = SolveBudget::iterations(1000);
      const TransitionMatrix uniform = uniform_transitions(zi);
      const ZoneOrdering with_uniform =
          order_zones(inst, zi, g, uniform, WeightVector{{1.0, 1.0}}, budget);
      const ZoneOrdering distance_only =
          order_zones(inst, zi, g, uniform, WeightVector{{1.0, 0.0}}, budget);

      // A symmetric distance matrix makes every circuit tie with its own
      // reversal, so the sequences may legitimately differ in direction.
      // The uniform preference must not change which circuits are optimal.
      const Matrix c_dist = mixed_zone_cost(g.d_prime, uniform.p, WeightVector{{1.0, 0.0}});
      CHECK(tour_cost(c_dist, with_uniform.sequence) ==
            doctest::Approx(distance_only.cost).epsilon(1e-12));
    }
  }

  TEST_CASE("scaling the weights leaves the optimal ordering unchanged") {
    std::mt19937_64 rng(47);
    for (int rep = 0; rep < 20; ++rep) {
      const std::size_t m = 4 + rep % 3;
      const Matrix p = oracle::random_stochastic(m, rng);
      const Matrix d_prime = oracle::random_stochastic(m, rng);
      const ZoneTerms terms = zone_terms(d_prime, p);
      const WeightVector w{{0.7, 1.9}};
      const WeightVector scaled{{0.7 * 3.5, 1.9 * 3.5}};
      CHECK(solve_exact(terms.cost(w)).order == solve_exact(terms.cost(scaled)).order);
    }
  }

  TEST_CASE("stops outside the zone index are rejected") {
    auto inst = fixtures::make_instance("r1", {{"Z1", 1, 0}, {"Z2", 2, 0}});
    const ZoneIndex zi = instance_zone_index(inst);
    const ZoneGeometry g = build_geometry(inst, zi);
    auto other = inst;
    other.stops[2].zone_id = "UNKNOWN";
    CHECK_THROWS_AS(order_zones(other, zi, g, uniform_transitions(zi),
                                WeightVector::zone_default(), SolveBudget::iterations(10)),
                    InvalidInput);
  }

  TEST_CASE("ordering_from_sequence validates and inverts") {
    const ZoneOrdering zo = ordering_from_sequence({0, 2, 1}, 5.0);
    CHECK(zo.rank == std::vector<std::size_t>{0, 2, 1});
    CHECK(zo.cost == 5.0);
    CHECK_THROWS_AS(ordering_from_sequence({1, 0, 2}), InvalidInput);
    CHECK_THROWS_AS(ordering_from_sequence({0, 0, 1}), InvalidInput);
  }
}
