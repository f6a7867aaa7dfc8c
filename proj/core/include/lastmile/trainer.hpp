#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lastmile/matrix.hpp"
#include "lastmile/transition.hpp"
#include "lastmile/tsp.hpp"
#include "lastmile/types.hpp"
#include "lastmile/zone_stage.hpp"

namespace lastmile {

/// One structured training example. `cost` assembles the instance's cost
/// matrix under the current weights; `features` maps any tour over that
/// matrix to the feature vector satisfying dot(w, features(t)) = tour cost.
struct TrainExample {
  std::string id;
  Tour truth;
  std::function<Matrix(const WeightVector&)> cost;
  std::function<std::vector<double>(const Tour&)> features;
};

struct TrainConfig {
  double learning_rate = 1e-5;
  std::size_t epochs = 1;
  /// Oracle budget per inference call. Iteration caps keep training
  /// deterministic; wall-clock budgets belong to operational prediction.
  SolveBudget budget = SolveBudget::iterations(20000);
  WeightVector initial;
  bool shuffle = false;
  std::uint64_t seed = 0;
};

/// Per-epoch training telemetry.
struct EpochStats {
  std::size_t updates = 0;
  /// Mean L2 norm of the feature gap over all examples of the epoch
  /// (matched predictions contribute zero).
  double mean_gap = 0.0;
};

struct TrainTrace {
  /// Length epochs+1; snapshots[0] is the initial weight vector.
  std::vector<WeightVector> snapshots;
  std::vector<EpochStats> epochs;
};

struct TrainResult {
  WeightVector weights;
  TrainTrace trace;
};

/// Structured perceptron. Per example: infer the min-cost tour under the
/// current weights, and when its arc set differs from the truth apply
/// w += learning_rate * (features(predicted) - features(truth)).
/// Examples are visited in order unless cfg.shuffle reshuffles each epoch.
TrainResult train(const std::vector<TrainExample>& examples, const TrainConfig& cfg);

/// Zone-stage examples: mixed-cost inference over the instance's zones with
/// the truth taken from the historical zone sequence. Instances without an
/// actual sequence or with fewer than two regular zones are skipped (their
/// circuit is unique, so they carry no signal).
std::vector<TrainExample> zone_examples(const std::vector<RoutingInstance>& instances,
                                        const TransitionMatrix& transitions);

/// Stop-stage examples: penalized-cost inference with the order index taken
/// from each route's own historical zone ordering and the truth from
/// actual_sequence. Instances without an actual sequence or fewer than 3
/// stops are skipped.
std::vector<TrainExample> stop_examples(const std::vector<RoutingInstance>& instances);

std::string trace_to_json(const TrainTrace& trace);

}  // namespace lastmile
