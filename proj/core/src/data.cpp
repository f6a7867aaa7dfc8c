#include "lastmile/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "lastmile/errors.hpp"
#include "lastmile/stop_stage.hpp"
#include "lastmile/tsp.hpp"
#include "lastmile/zone_stage.hpp"
#include "json.hpp"

namespace lastmile {

void reindex(Corpus& c) { c.zone_index = corpus_zone_index(c.instances); }

namespace {

nlohmann::json instance_to_json(const RoutingInstance& inst) {
  nlohmann::json doc;
  doc["route_id"] = inst.route_id;
  doc["station_id"] = inst.station_id;
  nlohmann::json stops = nlohmann::json::array();
  for (const Stop& s : inst.stops) {
    nlohmann::json stop;
    stop["id"] = s.id;
    stop["lat"] = s.lat;
    stop["lng"] = s.lng;
    stop["zone_id"] = s.zone_id;
    stops.push_back(std::move(stop));
  }
  doc["stops"] = std::move(stops);
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < inst.travel_times.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < inst.travel_times.cols(); ++j)
      row.push_back(inst.travel_times(i, j));
    rows.push_back(std::move(row));
  }
  doc["travel_times"] = std::move(rows);
  if (inst.actual_sequence) doc["actual_sequence"] = *inst.actual_sequence;
  if (inst.quality) doc["quality"] = to_string(*inst.quality);
  return doc;
}

RoutingInstance instance_from_json(const nlohmann::json& doc, std::size_t line_no) {
  const auto context = [&]() {
    std::string id = doc.contains("route_id") && doc["route_id"].is_string()
                         ? doc["route_id"].get<std::string>()
                         : "<unknown>";
    return "line " + std::to_string(line_no) + " (route '" + id + "')";
  };
  try {
    RoutingInstance inst;
    inst.route_id = doc.at("route_id").get<std::string>();
    inst.station_id = doc.at("station_id").get<std::string>();
    for (const auto& stop : doc.at("stops")) {
      Stop s;
      s.id = stop.at("id").get<std::string>();
      s.lat = stop.at("lat").get<double>();
      s.lng = stop.at("lng").get<double>();
      s.zone_id = stop.at("zone_id").get<std::string>();
      inst.stops.push_back(std::move(s));
    }
    const auto& rows = doc.at("travel_times");
    const std::size_t n = inst.stops.size();
    if (rows.size() != n)
      throw ParseError(context() + ": travel_times has " + std::to_string(rows.size()) +
                       " rows for " + std::to_string(n) + " stops");
    inst.travel_times = Matrix::square(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != n)
        throw ParseError(context() + ": travel_times row " + std::to_string(i) +
                         " has " + std::to_string(rows[i].size()) + " columns");
      for (std::size_t j = 0; j < n; ++j)
        inst.travel_times(i, j) = rows[i][j].get<double>();
    }
    if (doc.contains("actual_sequence"))
      inst.actual_sequence = doc["actual_sequence"].get<std::vector<std::size_t>>();
    if (doc.contains("quality")) {
      try {
        inst.quality = quality_from_string(doc["quality"].get<std::string>());
      } catch (const InvalidInput& e) {
        throw ParseError(context() + ": " + e.what());
      }
    }
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(context() + ": " + e.what());
  }
}

}  // namespace

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open corpus file '" + path + "'");

  Corpus c;
  c.provenance = path;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    RoutingInstance inst = instance_from_json(doc, line_no);
    validate_instance(inst);
    if (!ids.insert(inst.route_id).second)
      throw ValidationError("duplicate route id '" + inst.route_id + "' at line " +
                            std::to_string(line_no));
    c.instances.push_back(std::move(inst));
  }
  if (!c.instances.empty()) reindex(c);
  return c;
}

void save_corpus(const Corpus& c, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write corpus file '" + path + "'");
  for (const RoutingInstance& inst : c.instances) out << instance_to_json(inst).dump() << '\n';
  if (!out.flush()) throw Error("failed writing corpus file '" + path + "'");
}

std::pair<Corpus, Corpus> stratified_split(const Corpus& c, const SplitSpec& spec) {
  if (!(spec.test_fraction > 0.0) || !(spec.test_fraction < 1.0))
    throw InvalidInput("test fraction must lie in (0, 1)");

  std::vector<std::string> unlabeled;
  std::vector<std::vector<std::size_t>> by_label(3);
  for (std::size_t i = 0; i < c.instances.size(); ++i) {
    const auto& inst = c.instances[i];
    if (!inst.quality) {
      unlabeled.push_back(inst.route_id);
      continue;
    }
    by_label[static_cast<std::size_t>(*inst.quality)].push_back(i);
  }
  if (!unlabeled.empty()) {
    std::string msg = "cannot stratify unlabeled routes:";
    for (const std::string& id : unlabeled) msg += " '" + id + "'";
    throw MissingLabel(msg);
  }

  std::mt19937_64 rng(spec.seed);
  std::vector<bool> in_test(c.instances.size(), false);
  for (auto& group : by_label) {
    std::shuffle(group.begin(), group.end(), rng);
    const auto n_test = static_cast<std::size_t>(
        std::llround(spec.test_fraction * static_cast<double>(group.size())));
    for (std::size_t k = 0; k < n_test; ++k) in_test[group[k]] = true;
  }

  Corpus train;
  Corpus test;
  train.provenance = c.provenance + "#train";
  test.provenance = c.provenance + "#test";
  for (std::size_t i = 0; i < c.instances.size(); ++i)
    (in_test[i] ? test : train).instances.push_back(c.instances[i]);
  if (!train.instances.empty()) reindex(train);
  if (!test.instances.empty()) reindex(test);
  return {std::move(train), std::move(test)};
}

void validate_config(const SynthConfig& cfg) {
  const auto fail = [](const std::string& what) {
    throw InvalidInput("synthetic config: " + what);
  };
  if (cfg.n_instances == 0) fail("n_instances must be positive");
  if (cfg.grid_size < 2) fail("grid must be at least 2x2");
  if (cfg.min_stops_per_zone == 0) fail("min_stops_per_zone must be positive");
  if (cfg.max_stops_per_zone < cfg.min_stops_per_zone)
    fail("max_stops_per_zone below min_stops_per_zone");
  if (!(cfg.zone_presence > 0.0) || cfg.zone_presence > 1.0)
    fail("zone_presence must lie in (0, 1]");
  if (cfg.preference_strength < 0.0 || cfg.preference_strength > 1.0)
    fail("preference_strength must lie in [0, 1]");
  if (!(cfg.speed > 0.0)) fail("speed must be positive");
  validate_weights(cfg.hidden_weights, kStopFeatureCount);
  if (cfg.frac_high < 0.0 || cfg.frac_medium < 0.0 || cfg.frac_high + cfg.frac_medium > 1.0)
    fail("label fractions must be nonnegative and sum to at most 1");
}

namespace {

std::string zone_name(std::size_t row, std::size_t col) {
  return "Z" + std::to_string(row) + "-" + std::to_string(col);
}

// Seeded swaps of non-depot positions, used to degrade medium/low routes.
void perturb(std::vector<std::size_t>& seq, std::size_t swaps, std::mt19937_64& rng) {
  if (seq.size() < 3) return;
  std::uniform_int_distribution<std::size_t> pick(1, seq.size() - 1);
  for (std::size_t s = 0; s < swaps; ++s) {
    std::size_t u = pick(rng);
    std::size_t v = pick(rng);
    while (v == u) v = pick(rng);
    std::swap(seq[u], seq[v]);
  }
}

}  // namespace

Corpus generate_synthetic(const SynthConfig& cfg) {
  validate_config(cfg);
  std::mt19937_64 rng(cfg.seed);
  const std::size_t g = cfg.grid_size;
  const std::size_t n_zones = g * g;

  // The planner's hidden habit: a canonical tour over all zones, drawn
  // independently of geometry. Routes tend to walk zones in this order
  // even when distance argues otherwise.
  std::vector<std::size_t> canonical(n_zones);
  for (std::size_t z = 0; z < n_zones; ++z) canonical[z] = z;
  std::shuffle(canonical.begin(), canonical.end(), rng);
  std::unordered_map<std::string, double> canon_rank;
  for (std::size_t k = 0; k < n_zones; ++k) {
    const std::size_t z = canonical[k];
    canon_rank[zone_name(z / g, z % g)] = static_cast<double>(k);
  }

  // Station at the grid center; zone z covers the unit cell
  // [col, col+1) x [row, row+1).
  const double station_x = static_cast<double>(g) / 2.0;
  const double station_y = static_cast<double>(g) / 2.0;

  const std::size_t n_high = static_cast<std::size_t>(
      std::floor(cfg.frac_high * static_cast<double>(cfg.n_instances)));
  const std::size_t n_medium = static_cast<std::size_t>(
      std::floor(cfg.frac_medium * static_cast<double>(cfg.n_instances)));

  Corpus corpus;
  corpus.provenance = "synthetic:seed=" + std::to_string(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> stops_dist(cfg.min_stops_per_zone,
                                                        cfg.max_stops_per_zone);

  for (std::size_t t = 0; t < cfg.n_instances; ++t) {
    RoutingInstance inst;
    inst.route_id = "r" + std::to_string(t);
    inst.station_id = "S0";

    Stop station;
    station.id = inst.route_id + "-s0";
    station.lng = station_x;
    station.lat = station_y;
    station.zone_id = station_zone_id(inst.station_id);
    inst.stops.push_back(std::move(station));

    // Zones present today: a Bernoulli(zone_presence) draw, re-rolled until
    // at least two zones show up.
    std::vector<std::size_t> present;
    while (present.size() < 2) {
      present.clear();
      for (std::size_t z = 0; z < n_zones; ++z)
        if (unit(rng) < cfg.zone_presence) present.push_back(z);
    }

    for (std::size_t z : present) {
      const std::size_t row = z / g;
      const std::size_t col = z % g;
      const std::size_t n_stops = stops_dist(rng);
      for (std::size_t s = 0; s < n_stops; ++s) {
        Stop stop;
        stop.id = inst.route_id + "-s" + std::to_string(inst.stops.size());
        stop.lng = static_cast<double>(col) + unit(rng);
        stop.lat = static_cast<double>(row) + unit(rng);
        stop.zone_id = zone_name(row, col);
        inst.stops.push_back(std::move(stop));
      }
    }

    const std::size_t n = inst.stops.size();
    inst.travel_times = Matrix::square(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double dx = inst.stops[i].lng - inst.stops[j].lng;
        const double dy = inst.stops[i].lat - inst.stops[j].lat;
        inst.travel_times(i, j) = std::hypot(dx, dy) * cfg.speed;
      }

    // Plan the route the hidden planner would drive. Zone stage: blend of
    // normalized centroid distance and canonical-rank gap.
    const ZoneIndex zi = instance_zone_index(inst);
    const ZoneGeometry geom = build_geometry(inst, zi);
    const std::size_t m = zi.size();
    double max_d = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) max_d = std::max(max_d, geom.d(i, j));
    if (max_d <= 0.0) max_d = 1.0;

    // Zone ranks in the canonical tour, station pinned at rank 0.
    std::vector<double> rank_of(m, 0.0);
    for (std::size_t zidx = 1; zidx < m; ++zidx)
      rank_of[zidx] = canon_rank.at(zi.id(zidx)) + 1.0;
    Matrix plan_cost = Matrix::square(m, 0.0);
    const double max_rank_gap = static_cast<double>(n_zones);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        const double dist_term = geom.d(i, j) / max_d;
        const double rank_term = std::fabs(rank_of[j] - rank_of[i]) / max_rank_gap;
        plan_cost(i, j) = (1.0 - cfg.preference_strength) * dist_term +
                          cfg.preference_strength * rank_term;
      }

    const SolveBudget budget = SolveBudget::iterations(60000);
    const Tour zone_tour = solve(plan_cost, budget, cfg.seed + t);
    const ZoneOrdering zo = ordering_from_sequence(zone_tour.order, zone_tour.cost);
    const std::vector<std::size_t> o = order_index_of(inst, zi, zo);
    const Tour stop_tour = order_stops(inst, o, cfg.hidden_weights, budget, cfg.seed + t);

    std::vector<std::size_t> actual = stop_tour.order;
    if (t < n_high) {
      inst.quality = Quality::high;
    } else if (t < n_high + n_medium) {
      inst.quality = Quality::medium;
      perturb(actual, cfg.medium_swaps, rng);
    } else {
      inst.quality = Quality::low;
      perturb(actual, cfg.low_swaps, rng);
    }
    inst.actual_sequence = std::move(actual);

    validate_instance(inst);
    corpus.instances.push_back(std::move(inst));
  }

  reindex(corpus);
  return corpus;
}

}  // namespace lastmile
