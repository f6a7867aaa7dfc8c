#include <limits>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "lastmile/errors.hpp"
#include "lastmile/types.hpp"

using namespace lastmile;

TEST_SUITE("core") {
  TEST_CASE("quality labels round-trip and reject junk") {
    for (Quality q : {Quality::high, Quality::medium, Quality::low})
      CHECK(quality_from_string(to_string(q)) == q);
    CHECK_THROWS_AS(quality_from_string("great"), InvalidInput);
    CHECK_THROWS_AS(quality_from_string(""), InvalidInput);
  }

  TEST_CASE("station pseudo-zone is distinct per station") {
    CHECK(station_zone_id("A") != station_zone_id("B"));
    CHECK(station_zone_id("A") == station_zone_id("A"));
  }

  TEST_CASE("validate_instance accepts a well-formed instance") {
    auto inst = fixtures::with_identity_actual(
        fixtures::make_instance("r1", {{"Z1", 1, 0}, {"Z1", 1, 1}, {"Z2", 2, 0}}));
    CHECK_NOTHROW(validate_instance(inst));
  }

  TEST_CASE("validate_instance rejects malformed instances") {
    auto base = fixtures::make_instance("r1", {{"Z1", 1, 0}, {"Z2", 2, 0}});

    SUBCASE("duplicate stop ids") {
      auto inst = base;
      inst.stops[2].id = inst.stops[1].id;
      CHECK_THROWS_AS(validate_instance(inst), ValidationError);
    }
    SUBCASE("wrong travel time dimensions") {
      auto inst = base;
      inst.travel_times = Matrix::square(2, 0.0);
      CHECK_THROWS_AS(validate_instance(inst), ValidationError);
    }
    SUBCASE("negative travel time") {
      auto inst = base;
      inst.travel_times(0, 1) = -1.0;
      CHECK_THROWS_AS(validate_instance(inst), ValidationError);
    }
    SUBCASE("station stop must carry the pseudo-zone") {
      auto inst = base;
      inst.stops[0].zone_id = "Z1";
      CHECK_THROWS_AS(validate_instance(inst), ValidationError);
    }
    SUBCASE("regular stop cannot reuse the pseudo-zone") {
      auto inst = base;
      inst.stops[1].zone_id = station_zone_id(inst.station_id);
      CHECK_THROWS_AS(validate_instance(inst), ValidationError);
    }
    SUBCASE("actual sequence must be a station-rooted permutation") {
      auto inst = fixtures::with_actual(base, {0, 1, 1});
      CHECK_THROWS_AS(validate_instance(inst), ValidationError);
      inst = fixtures::with_actual(base, {1, 0, 2});
      CHECK_THROWS_AS(validate_instance(inst), ValidationError);
      inst = fixtures::with_actual(base, {0, 1});
      CHECK_THROWS_AS(validate_instance(inst), ValidationError);
    }
  }

  TEST_CASE("zone index lookups") {
    ZoneIndex zi({"station:S", "A", "B"});
    CHECK(zi.size() == 3);
    CHECK(zi.at("A") == 1);
    CHECK(zi.id(2) == "B");
    CHECK(zi.contains("B"));
    CHECK_FALSE(zi.contains("C"));
    CHECK_THROWS_AS(zi.at("C"), InvalidInput);
    CHECK_THROWS_AS(ZoneIndex({"A", "A"}), InvalidInput);
  }

  TEST_CASE("instance zone index pins the station at 0 and sorts the rest") {
    auto inst = fixtures::make_instance("r1", {{"Zb", 1, 0}, {"Za", 2, 0}, {"Zb", 3, 0}});
    const ZoneIndex zi = instance_zone_index(inst);
    REQUIRE(zi.size() == 3);
    CHECK(zi.id(0) == station_zone_id("S"));
    CHECK(zi.id(1) == "Za");
    CHECK(zi.id(2) == "Zb");
  }

  TEST_CASE("corpus zone index puts stations before regular zones") {
    auto a = fixtures::make_instance("r1", {{"Zx", 1, 0}});
    auto b = fixtures::make_instance("r2", {{"Zd", 1, 0}});
    b.station_id = "T";
    b.stops[0].zone_id = station_zone_id("T");
    const ZoneIndex zi = corpus_zone_index({a, b});
    REQUIRE(zi.size() == 4);
    CHECK(zi.id(0) == station_zone_id("S"));
    CHECK(zi.id(1) == station_zone_id("T"));
    CHECK(zi.id(2) == "Zd");
    CHECK(zi.id(3) == "Zx");
  }

  TEST_CASE("tour validation") {
    CHECK_NOTHROW(validate_tour(Tour{{0, 2, 1}, 0.0}, 3));
    CHECK_THROWS_AS(validate_tour(Tour{{1, 0, 2}, 0.0}, 3), InvalidInput);
    CHECK_THROWS_AS(validate_tour(Tour{{0, 1}, 0.0}, 3), InvalidInput);
    CHECK_THROWS_AS(validate_tour(Tour{{0, 1, 1}, 0.0}, 3), InvalidInput);
  }

  TEST_CASE("same_circuit compares arc sets, not representations") {
    const Tour a{{0, 1, 2, 3}, 0.0};
    const Tour rotated{{2, 3, 0, 1}, 0.0};
    const Tour different{{0, 2, 1, 3}, 0.0};
    CHECK(same_circuit(a, a));
    CHECK(same_circuit(a, rotated));
    CHECK_FALSE(same_circuit(a, different));
    CHECK_FALSE(same_circuit(a, Tour{{0, 1, 2}, 0.0}));
  }

  TEST_CASE("tour adjacency holds one successor per node") {
    const Tour t{{0, 2, 1}, 0.0};
    const Matrix a = tour_to_adjacency(t, 3);
    CHECK(a(0, 2) == 1.0);
    CHECK(a(2, 1) == 1.0);
    CHECK(a(1, 0) == 1.0);
    double total = 0.0;
    for (double v : a.data()) total += v;
    CHECK(total == 3.0);

    const Matrix loop = tour_to_adjacency(Tour{{0}, 0.0}, 1);
    CHECK(loop(0, 0) == 1.0);
  }

  TEST_CASE("zone sequence keeps first-visit positions") {
    auto inst = fixtures::make_instance(
        "r1", {{"Z1", 1, 0}, {"Z1", 1, 1}, {"Z2", 2, 0}, {"Z1", 1, 2}, {"Z3", 3, 0}});
    // Visit order: Z1, Z2, back into Z1, then Z3.
    inst = fixtures::with_actual(inst, {0, 1, 3, 4, 5, 2});
    const auto seq = zone_sequence_of(inst);
    REQUIRE(seq.size() == 4);
    CHECK(seq[0] == station_zone_id("S"));
    CHECK(seq[1] == "Z1");
    CHECK(seq[2] == "Z2");
    CHECK(seq[3] == "Z3");

    inst.actual_sequence.reset();
    CHECK_THROWS_AS(zone_sequence_of(inst), MissingLabel);
  }

  TEST_CASE("weight vector defaults and validation") {
    CHECK(WeightVector::zone_default().size() == 2);
    CHECK(WeightVector::stop_default().size() == 7);
    CHECK(WeightVector::stop_default()[0] == 2.0);
    CHECK_NOTHROW(validate_weights(WeightVector::zone_default(), 2));
    CHECK_THROWS_AS(validate_weights(WeightVector::zone_default(), 7), InvalidInput);
    WeightVector bad{{1.0, std::numeric_limits<double>::quiet_NaN()}};
    CHECK_THROWS_AS(validate_weights(bad, 2), InvalidInput);
  }

  TEST_CASE("matrix basics") {
    Matrix m(2, 3, 1.5);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK_FALSE(m.is_square());
    m(1, 2) = -4.0;
    CHECK(m.max_abs() == 4.0);
    CHECK(m.all_finite());
    m(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_FALSE(m.all_finite());
    CHECK_THROWS_AS(require_square(m, "m"), InvalidInput);
    CHECK_THROWS_AS(require_square(Matrix::square(2), 3, "m"), InvalidInput);
    CHECK_NOTHROW(require_square(Matrix::square(3), 3, "m"));
  }
}
