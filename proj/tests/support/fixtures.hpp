#pragma once

// Small instance builders shared by the test suites.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lastmile/types.hpp"

namespace fixtures {

struct StopSpec {
  std::string zone_id;
  double lng = 0.0;
  double lat = 0.0;
};

// Instance from explicit stop placements. Stop 0 (the station) is added
// automatically at the given coordinates; travel times are Euclidean
// distances times `speed`.
inline lastmile::RoutingInstance make_instance(
    const std::string& route_id, const std::vector<StopSpec>& stops,
    double station_lng = 0.0, double station_lat = 0.0, double speed = 1.0) {
  lastmile::RoutingInstance inst;
  inst.route_id = route_id;
  inst.station_id = "S";

  lastmile::Stop station;
  station.id = route_id + "-s0";
  station.lng = station_lng;
  station.lat = station_lat;
  station.zone_id = lastmile::station_zone_id(inst.station_id);
  inst.stops.push_back(station);

  for (const StopSpec& s : stops) {
    lastmile::Stop stop;
    stop.id = route_id + "-s" + std::to_string(inst.stops.size());
    stop.lng = s.lng;
    stop.lat = s.lat;
    stop.zone_id = s.zone_id;
    inst.stops.push_back(stop);
  }

  const std::size_t n = inst.stops.size();
  inst.travel_times = lastmile::Matrix::square(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dx = inst.stops[i].lng - inst.stops[j].lng;
      const double dy = inst.stops[i].lat - inst.stops[j].lat;
      inst.travel_times(i, j) = std::hypot(dx, dy) * speed;
    }
  return inst;
}

inline lastmile::RoutingInstance with_actual(lastmile::RoutingInstance inst,
                                             std::vector<std::size_t> seq,
                                             lastmile::Quality q = lastmile::Quality::high) {
  inst.actual_sequence = std::move(seq);
  inst.quality = q;
  return inst;
}

// Identity actual sequence: stops visited in index order.
inline lastmile::RoutingInstance with_identity_actual(
    lastmile::RoutingInstance inst, lastmile::Quality q = lastmile::Quality::high) {
  std::vector<std::size_t> seq(inst.stops.size());
  for (std::size_t i = 0; i < seq.size(); ++i) seq[i] = i;
  return with_actual(std::move(inst), std::move(seq), q);
}

}  // namespace fixtures
