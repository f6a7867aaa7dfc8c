#include "lastmile/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>

#include "lastmile/errors.hpp"
#include "lastmile/stop_stage.hpp"
#include "json.hpp"

namespace lastmile {

TrainResult train(const std::vector<TrainExample>& examples, const TrainConfig& cfg) {
  if (!(cfg.learning_rate > 0.0)) throw InvalidInput("learning rate must be positive");
  if (cfg.epochs == 0) throw InvalidInput("epochs must be at least 1");
  if (cfg.initial.size() == 0) throw InvalidInput("initial weights are empty");
  if (cfg.budget.max_iterations == 0 && cfg.budget.max_seconds <= 0.0)
    throw InvalidInput("training budget needs a positive iteration cap or deadline");

  WeightVector w = cfg.initial;
  TrainTrace trace;
  trace.snapshots.push_back(w);

  std::vector<std::size_t> visit(examples.size());
  std::iota(visit.begin(), visit.end(), 0);
  std::mt19937_64 rng(cfg.seed);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) std::shuffle(visit.begin(), visit.end(), rng);
    EpochStats stats;
    double gap_norm_sum = 0.0;
    for (std::size_t idx : visit) {
      const TrainExample& ex = examples[idx];
      Tour predicted;
      try {
        predicted = solve(ex.cost(w), cfg.budget, cfg.seed);
      } catch (const Error& e) {
        throw TrainError("example '" + ex.id + "', epoch " + std::to_string(epoch + 1) +
                         ": " + e.what());
      }
      if (same_circuit(predicted, ex.truth)) continue;

      const std::vector<double> fp = ex.features(predicted);
      const std::vector<double> ft = ex.features(ex.truth);
      if (fp.size() != w.size() || ft.size() != w.size())
        throw TrainError("example '" + ex.id + "': feature length differs from weights");
      double sq = 0.0;
      for (std::size_t k = 0; k < w.size(); ++k) {
        const double gap = fp[k] - ft[k];
        w.values[k] += cfg.learning_rate * gap;
        sq += gap * gap;
      }
      gap_norm_sum += std::sqrt(sq);
      ++stats.updates;
    }
    stats.mean_gap =
        examples.empty() ? 0.0 : gap_norm_sum / static_cast<double>(examples.size());
    trace.epochs.push_back(stats);
    trace.snapshots.push_back(w);
  }
  return {w, trace};
}

std::vector<TrainExample> zone_examples(const std::vector<RoutingInstance>& instances,
                                        const TransitionMatrix& transitions) {
  std::vector<TrainExample> out;
  out.reserve(instances.size());
  for (const RoutingInstance& inst : instances) {
    if (!inst.actual_sequence) continue;
    const ZoneIndex zi = instance_zone_index(inst);
    if (zi.size() < 3) continue;

    const ZoneGeometry g = build_geometry(inst, zi);
    const Matrix p_sub = slice_transitions(transitions, zi);
    auto terms = std::make_shared<ZoneTerms>(zone_terms(g.d_prime, p_sub));

    const std::vector<std::string> zseq = zone_sequence_of(inst);
    Tour truth;
    truth.order.reserve(zseq.size());
    for (const std::string& z : zseq) truth.order.push_back(zi.at(z));
    validate_tour(truth, zi.size());

    TrainExample ex;
    ex.id = inst.route_id;
    ex.truth = std::move(truth);
    ex.cost = [terms](const WeightVector& w) { return terms->cost(w); };
    ex.features = [terms](const Tour& t) { return zone_feature_vector(*terms, t); };
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<TrainExample> stop_examples(const std::vector<RoutingInstance>& instances) {
  std::vector<TrainExample> out;
  out.reserve(instances.size());
  for (const RoutingInstance& inst : instances) {
    if (!inst.actual_sequence) continue;
    if (inst.stops.size() < 3) continue;
    const ZoneIndex zi = instance_zone_index(inst);

    const std::vector<std::string> zseq = zone_sequence_of(inst);
    std::vector<std::size_t> seq;
    seq.reserve(zseq.size());
    for (const std::string& z : zseq) seq.push_back(zi.at(z));
    const ZoneOrdering zo = ordering_from_sequence(std::move(seq));
    auto o = std::make_shared<std::vector<std::size_t>>(order_index_of(inst, zi, zo));

    TrainExample ex;
    ex.id = inst.route_id;
    ex.truth = Tour{*inst.actual_sequence, 0.0};
    auto ip = std::make_shared<RoutingInstance>(inst);
    ex.cost = [ip, o](const WeightVector& w) { return penalty_cost(*ip, *o, w); };
    ex.features = [ip, o](const Tour& t) { return stop_feature_vector(*ip, *o, t); };
    out.push_back(std::move(ex));
  }
  return out;
}

std::string trace_to_json(const TrainTrace& trace) {
  nlohmann::json doc;
  doc["initial_weights"] = trace.snapshots.empty() ? std::vector<double>{}
                                                   : trace.snapshots.front().values;
  nlohmann::json epochs = nlohmann::json::array();
  for (std::size_t e = 0; e < trace.epochs.size(); ++e) {
    nlohmann::json row;
    row["epoch"] = e + 1;
    row["updates"] = trace.epochs[e].updates;
    row["mean_feature_gap"] = trace.epochs[e].mean_gap;
    row["weights"] = trace.snapshots[e + 1].values;
    epochs.push_back(std::move(row));
  }
  doc["epochs"] = std::move(epochs);
  return doc.dump();
}

}  // namespace lastmile
