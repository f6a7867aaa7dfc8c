#include "lastmile/stop_stage.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "lastmile/errors.hpp"

namespace lastmile {

PenaltyCategory classify(std::size_t oi, std::size_t oj) {
  if (oi == oj) return PenaltyCategory::same;
  if (oj == oi + 1) return PenaltyCategory::next;
  if (oj == oi + 2) return PenaltyCategory::next2;
  if (oj + 1 == oi) return PenaltyCategory::prev;
  if (oj + 2 == oi) return PenaltyCategory::prev2;
  return PenaltyCategory::far;
}

std::size_t weight_slot(PenaltyCategory c) {
  switch (c) {
    case PenaltyCategory::same: return 1;
    case PenaltyCategory::next: return 2;
    case PenaltyCategory::next2: return 3;
    case PenaltyCategory::prev: return 4;
    case PenaltyCategory::prev2: return 5;
    case PenaltyCategory::far: return 6;
  }
  throw InvalidInput("unknown penalty category");
}

std::vector<std::size_t> order_index_of(const RoutingInstance& inst, const ZoneIndex& zi,
                                        const ZoneOrdering& zo) {
  if (zo.rank.size() != zi.size())
    throw InvalidInput("zone ordering does not cover the zone index");
  std::vector<std::size_t> o;
  o.reserve(inst.stops.size());
  for (const Stop& s : inst.stops) o.push_back(zo.rank[zi.at(s.zone_id)]);
  if (!o.empty() && o[0] != 0)
    throw InvalidInput("station stop must rank 0 in the zone ordering");
  return o;
}

Matrix penalty_cost(const RoutingInstance& inst, const std::vector<std::size_t>& o,
                    const WeightVector& w) {
  validate_weights(w, kStopFeatureCount);
  const std::size_t n = inst.stops.size();
  if (o.size() != n) throw InvalidInput("order index does not cover the stops");
  require_square(inst.travel_times, "travel times");
  if (inst.travel_times.rows() != n)
    throw InvalidInput("travel times do not cover the stops");

  Matrix c = Matrix::square(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      c(i, j) = w[0] * inst.travel_times(i, j) + w[weight_slot(classify(o[i], o[j]))];
    }
  return c;
}

std::vector<double> stop_feature_vector(const RoutingInstance& inst,
                                        const std::vector<std::size_t>& o, const Tour& t) {
  const std::size_t n = inst.stops.size();
  if (o.size() != n) throw InvalidInput("order index does not cover the stops");
  validate_tour(t, n);
  std::vector<double> f(kStopFeatureCount, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = t.order[i];
    const std::size_t b = t.order[(i + 1) % n];
    if (a == b) continue;
    f[0] += inst.travel_times(a, b);
    f[weight_slot(classify(o[a], o[b]))] += 1.0;
  }
  return f;
}

Tour order_stops(const RoutingInstance& inst, const std::vector<std::size_t>& o,
                 const WeightVector& w, const SolveBudget& budget, std::uint64_t seed) {
  return solve(penalty_cost(inst, o, w), budget, seed);
}

namespace {

struct CategoryShare {
  double same = 0.0, next = 0.0, next2 = 0.0, next3plus = 0.0;
  double prev = 0.0, prev2 = 0.0, prev3plus = 0.0;
};

// Integer arc counts per category, then one division each: keeps the
// percentages reproducible by any second implementation of the walk.
CategoryShare route_shares(const RoutingInstance& inst) {
  const ZoneIndex zi = instance_zone_index(inst);
  const std::vector<std::string> zseq = zone_sequence_of(inst);
  std::vector<std::size_t> seq;
  seq.reserve(zseq.size());
  for (const std::string& z : zseq) seq.push_back(zi.at(z));
  const ZoneOrdering zo = ordering_from_sequence(std::move(seq));
  const std::vector<std::size_t> o = order_index_of(inst, zi, zo);

  const auto& order = *inst.actual_sequence;
  const std::size_t n = order.size();
  std::size_t counts[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t oi = o[order[i]];
    const std::size_t oj = o[order[(i + 1) % n]];
    switch (classify(oi, oj)) {
      case PenaltyCategory::same: ++counts[0]; break;
      case PenaltyCategory::next: ++counts[1]; break;
      case PenaltyCategory::next2: ++counts[2]; break;
      case PenaltyCategory::prev: ++counts[4]; break;
      case PenaltyCategory::prev2: ++counts[5]; break;
      case PenaltyCategory::far: ++counts[oj > oi ? 3 : 6]; break;
    }
  }
  const double arcs = static_cast<double>(n);
  CategoryShare share;
  share.same = static_cast<double>(counts[0]) * 100.0 / arcs;
  share.next = static_cast<double>(counts[1]) * 100.0 / arcs;
  share.next2 = static_cast<double>(counts[2]) * 100.0 / arcs;
  share.next3plus = static_cast<double>(counts[3]) * 100.0 / arcs;
  share.prev = static_cast<double>(counts[4]) * 100.0 / arcs;
  share.prev2 = static_cast<double>(counts[5]) * 100.0 / arcs;
  share.prev3plus = static_cast<double>(counts[6]) * 100.0 / arcs;
  return share;
}

std::string format_number(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<ViolationRow> violation_report(const std::vector<RoutingInstance>& instances) {
  std::map<Quality, std::vector<CategoryShare>> by_label;
  for (const RoutingInstance& inst : instances) {
    if (!inst.quality)
      throw MissingLabel("route '" + inst.route_id + "' has no quality label");
    by_label[*inst.quality].push_back(route_shares(inst));
  }
  if (by_label.empty()) throw InvalidInput("violation report needs at least one route");

  std::vector<ViolationRow> rows;
  for (Quality q : {Quality::high, Quality::medium, Quality::low}) {
    auto it = by_label.find(q);
    if (it == by_label.end()) continue;
    const auto& shares = it->second;
    ViolationRow row;
    row.label = to_string(q);
    row.routes = shares.size();
    for (const CategoryShare& s : shares) {
      row.same += s.same;
      row.next += s.next;
      row.next2 += s.next2;
      row.next3plus += s.next3plus;
      row.prev += s.prev;
      row.prev2 += s.prev2;
      row.prev3plus += s.prev3plus;
    }
    const double k = static_cast<double>(shares.size());
    row.same /= k;
    row.next /= k;
    row.next2 /= k;
    row.next3plus /= k;
    row.prev /= k;
    row.prev2 /= k;
    row.prev3plus /= k;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string violation_report_csv(const std::vector<ViolationRow>& rows) {
  std::string out = "label,routes,same,next,next2,next3plus,prev,prev2,prev3plus\n";
  for (const ViolationRow& r : rows) {
    out += r.label;
    out += ',' + std::to_string(r.routes);
    out += ',' + format_number(r.same);
    out += ',' + format_number(r.next);
    out += ',' + format_number(r.next2);
    out += ',' + format_number(r.next3plus);
    out += ',' + format_number(r.prev);
    out += ',' + format_number(r.prev2);
    out += ',' + format_number(r.prev3plus);
    out += '\n';
  }
  return out;
}

}  // namespace lastmile
