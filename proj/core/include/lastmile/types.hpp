#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lastmile/matrix.hpp"

namespace lastmile {

/// Planner-assigned route rating. Weights transition counting and
/// stratifies train/test splits.
enum class Quality { high, medium, low };

std::string to_string(Quality q);
Quality quality_from_string(const std::string& s);

/// One delivery location. Every stop belongs to exactly one zone.
struct Stop {
  std::string id;
  double lat = 0.0;
  double lng = 0.0;
  std::string zone_id;
};

/// The depot is modeled as its own pseudo-zone so that both routing stages
/// share "tour starts at index 0".
std::string station_zone_id(const std::string& station_id);

/// One day's routing problem. Stop 0 is the station/depot; travel times are
/// in seconds and need not be symmetric.
struct RoutingInstance {
  std::string route_id;
  std::string station_id;
  std::vector<Stop> stops;
  Matrix travel_times;
  std::optional<std::vector<std::size_t>> actual_sequence;
  std::optional<Quality> quality;

  std::size_t size() const { return stops.size(); }
};

/// Throws ValidationError naming the instance and offending field.
void validate_instance(const RoutingInstance& inst);

/// Bijection between zone ids and dense indices. When built for a single
/// station, the station's pseudo-zone is pinned to index 0.
class ZoneIndex {
public:
  ZoneIndex() = default;
  explicit ZoneIndex(std::vector<std::string> zones);

  std::size_t size() const { return zones_.size(); }
  const std::string& id(std::size_t index) const { return zones_[index]; }
  const std::vector<std::string>& ids() const { return zones_; }
  bool contains(const std::string& zone_id) const { return lookup_.count(zone_id) != 0; }

  /// Dense index of a zone id; throws InvalidInput for unknown zones.
  std::size_t at(const std::string& zone_id) const;

  friend bool operator==(const ZoneIndex& a, const ZoneIndex& b) { return a.zones_ == b.zones_; }

private:
  std::vector<std::string> zones_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

/// Zone index over one instance: station pseudo-zone at 0, then the
/// instance's zones sorted by id.
ZoneIndex instance_zone_index(const RoutingInstance& inst);

/// Zone index over a corpus: station pseudo-zones first (sorted), then all
/// regular zones sorted by id.
ZoneIndex corpus_zone_index(const std::vector<RoutingInstance>& instances);

/// Depot-rooted circuit: `order` is a permutation of 0..n-1 with order[0]=0.
/// `cost` is in the units of the matrix the tour was solved against (0 for
/// tours built from a bare order).
struct Tour {
  std::vector<std::size_t> order;
  double cost = 0.0;
};

/// True when both tours traverse the same directed arc set.
bool same_circuit(const Tour& a, const Tour& b);

void validate_tour(const Tour& t, std::size_t n);

/// Learnable linear coefficients: length 2 at the zone stage, 7 at the stop
/// stage.
struct WeightVector {
  std::vector<double> values;

  static WeightVector zone_default() { return {{1.0, 1.0}}; }
  static WeightVector stop_default() { return {{2.0, 1.0, 2.0, 4.0, 2.0, 4.0, 6.0}}; }

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Throws InvalidInput unless w has `expected` finite entries.
void validate_weights(const WeightVector& w, std::size_t expected);

/// Binary successor matrix of a tour: a[i][j] = 1 iff j immediately follows
/// i, including the closing arc. A 1-node tour is the degenerate self-loop.
Matrix tour_to_adjacency(const Tour& t, std::size_t n);

/// Zone ids of the visited stops in sequence order, deduplicated so that a
/// zone keeps its first-visit position. First element is the station
/// pseudo-zone. Requires actual_sequence.
std::vector<std::string> zone_sequence_of(const RoutingInstance& inst);

}  // namespace lastmile
