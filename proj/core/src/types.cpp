#include "lastmile/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "lastmile/errors.hpp"

namespace lastmile {

std::string to_string(Quality q) {
  switch (q) {
    case Quality::high: return "high";
    case Quality::medium: return "medium";
    case Quality::low: return "low";
  }
  throw InvalidInput("unknown quality value");
}

Quality quality_from_string(const std::string& s) {
  if (s == "high") return Quality::high;
  if (s == "medium") return Quality::medium;
  if (s == "low") return Quality::low;
  throw InvalidInput("unknown quality label '" + s + "'");
}

std::string station_zone_id(const std::string& station_id) {
  return "station:" + station_id;
}

void validate_instance(const RoutingInstance& inst) {
  const auto fail = [&](const std::string& what) {
    throw ValidationError("route '" + inst.route_id + "': " + what);
  };
  if (inst.route_id.empty()) throw ValidationError("instance with empty route_id");
  if (inst.station_id.empty()) fail("empty station_id");
  const std::size_t n = inst.stops.size();
  if (n == 0) fail("no stops");

  std::unordered_set<std::string> ids;
  for (const Stop& s : inst.stops) {
    if (s.id.empty()) fail("stop with empty id");
    if (!ids.insert(s.id).second) fail("duplicate stop id '" + s.id + "'");
    if (s.zone_id.empty()) fail("stop '" + s.id + "' has empty zone_id");
    if (!std::isfinite(s.lat) || !std::isfinite(s.lng))
      fail("stop '" + s.id + "' has non-finite coordinates");
  }
  if (inst.stops[0].zone_id != station_zone_id(inst.station_id))
    fail("stop 0 must carry the station pseudo-zone '" +
         station_zone_id(inst.station_id) + "'");
  for (std::size_t i = 1; i < n; ++i)
    if (inst.stops[i].zone_id == inst.stops[0].zone_id)
      fail("stop '" + inst.stops[i].id + "' reuses the station pseudo-zone");

  if (inst.travel_times.rows() != n || inst.travel_times.cols() != n)
    fail("travel_times is " + std::to_string(inst.travel_times.rows()) + "x" +
         std::to_string(inst.travel_times.cols()) + " for " + std::to_string(n) +
         " stops");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double t = inst.travel_times(i, j);
      if (!std::isfinite(t) || t < 0.0)
        fail("travel_times[" + std::to_string(i) + "][" + std::to_string(j) +
             "] is not a finite nonnegative number");
    }

  if (inst.actual_sequence) {
    const auto& seq = *inst.actual_sequence;
    if (seq.size() != n) fail("actual_sequence length differs from stop count");
    if (!seq.empty() && seq[0] != 0) fail("actual_sequence must start at the station");
    std::vector<bool> seen(n, false);
    for (std::size_t v : seq) {
      if (v >= n || seen[v]) fail("actual_sequence is not a permutation of the stops");
      seen[v] = true;
    }
  }
}

ZoneIndex::ZoneIndex(std::vector<std::string> zones) : zones_(std::move(zones)) {
  lookup_.reserve(zones_.size());
  for (std::size_t i = 0; i < zones_.size(); ++i) {
    if (!lookup_.emplace(zones_[i], i).second)
      throw InvalidInput("duplicate zone id '" + zones_[i] + "'");
  }
}

std::size_t ZoneIndex::at(const std::string& zone_id) const {
  auto it = lookup_.find(zone_id);
  if (it == lookup_.end()) throw InvalidInput("unknown zone id '" + zone_id + "'");
  return it->second;
}

ZoneIndex instance_zone_index(const RoutingInstance& inst) {
  if (inst.stops.empty()) throw InvalidInput("instance has no stops");
  std::set<std::string> regular;
  for (std::size_t i = 1; i < inst.stops.size(); ++i) regular.insert(inst.stops[i].zone_id);
  std::vector<std::string> zones;
  zones.reserve(regular.size() + 1);
  zones.push_back(inst.stops[0].zone_id);
  zones.insert(zones.end(), regular.begin(), regular.end());
  return ZoneIndex(std::move(zones));
}

ZoneIndex corpus_zone_index(const std::vector<RoutingInstance>& instances) {
  std::set<std::string> stations;
  std::set<std::string> regular;
  for (const RoutingInstance& inst : instances) {
    if (inst.stops.empty()) throw InvalidInput("instance has no stops");
    stations.insert(inst.stops[0].zone_id);
    for (std::size_t i = 1; i < inst.stops.size(); ++i)
      regular.insert(inst.stops[i].zone_id);
  }
  std::vector<std::string> zones(stations.begin(), stations.end());
  zones.insert(zones.end(), regular.begin(), regular.end());
  return ZoneIndex(std::move(zones));
}

void validate_tour(const Tour& t, std::size_t n) {
  if (t.order.size() != n)
    throw InvalidInput("tour covers " + std::to_string(t.order.size()) + " of " +
                       std::to_string(n) + " nodes");
  if (n == 0) throw InvalidInput("empty tour");
  if (t.order[0] != 0) throw InvalidInput("tour must start at node 0");
  std::vector<bool> seen(n, false);
  for (std::size_t v : t.order) {
    if (v >= n || seen[v]) throw InvalidInput("tour order is not a permutation");
    seen[v] = true;
  }
}

bool same_circuit(const Tour& a, const Tour& b) {
  const std::size_t n = a.order.size();
  if (b.order.size() != n) return false;
  if (n == 0) return true;
  std::vector<std::size_t> succ_a(n), succ_b(n);
  for (std::size_t i = 0; i < n; ++i) {
    succ_a[a.order[i]] = a.order[(i + 1) % n];
    succ_b[b.order[i]] = b.order[(i + 1) % n];
  }
  return succ_a == succ_b;
}

void validate_weights(const WeightVector& w, std::size_t expected) {
  if (w.size() != expected)
    throw InvalidInput("weight vector has " + std::to_string(w.size()) +
                       " entries, expected " + std::to_string(expected));
  for (double v : w.values)
    if (!std::isfinite(v)) throw InvalidInput("weight vector has a non-finite entry");
}

Matrix tour_to_adjacency(const Tour& t, std::size_t n) {
  validate_tour(t, n);
  Matrix a = Matrix::square(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) a(t.order[i], t.order[(i + 1) % n]) = 1.0;
  return a;
}

std::vector<std::string> zone_sequence_of(const RoutingInstance& inst) {
  if (!inst.actual_sequence)
    throw MissingLabel("route '" + inst.route_id + "' has no actual_sequence");
  std::vector<std::string> seq;
  std::unordered_set<std::string> seen;
  for (std::size_t stop : *inst.actual_sequence) {
    const std::string& z = inst.stops.at(stop).zone_id;
    if (seen.insert(z).second) seq.push_back(z);
  }
  return seq;
}

}  // namespace lastmile
