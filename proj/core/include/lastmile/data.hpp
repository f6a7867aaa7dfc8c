#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lastmile/types.hpp"

namespace lastmile {

/// A set of routing instances plus the zone index over their union.
/// `provenance` records the source path or generator seed.
struct Corpus {
  std::vector<RoutingInstance> instances;
  ZoneIndex zone_index;
  std::string provenance;

  std::size_t size() const { return instances.size(); }
};

/// Rebuilds the corpus zone index after instances change.
void reindex(Corpus& c);

/// JSON Lines, one instance per line. Loading validates every instance and
/// throws ParseError / ValidationError naming the offending route and field.
Corpus load_corpus(const std::string& path);
void save_corpus(const Corpus& c, const std::string& path);

struct SplitSpec {
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
};

/// Splits each quality label independently: seeded shuffle within the
/// label, round(test_fraction * count) instances to test. Throws
/// MissingLabel listing unlabeled instance ids.
std::pair<Corpus, Corpus> stratified_split(const Corpus& c, const SplitSpec& spec);

/// Synthetic corpus parameters. Zones are cells of a grid_size x grid_size
/// unit grid; a hidden canonical zone preference (uncorrelated with
/// geometry) simulates a planner's habits.
struct SynthConfig {
  std::size_t n_instances = 200;
  std::size_t grid_size = 4;
  std::size_t min_stops_per_zone = 3;
  std::size_t max_stops_per_zone = 6;
  /// Fraction of zones present in each instance.
  double zone_presence = 0.6;
  /// Blend between centroid distance (0) and the hidden preference (1) in
  /// the planner's zone stage.
  double preference_strength = 0.7;
  /// Hidden stop-stage weights the planner routes with.
  WeightVector hidden_weights = WeightVector::stop_default();
  /// Travel seconds per unit of Euclidean distance.
  double speed = 120.0;
  /// Label mix; high routes are planner-optimal, medium/low get
  /// increasingly many seeded arc swaps.
  double frac_high = 0.5;
  double frac_medium = 0.4;
  std::size_t medium_swaps = 1;
  std::size_t low_swaps = 3;
  std::uint64_t seed = 42;
};

void validate_config(const SynthConfig& cfg);

Corpus generate_synthetic(const SynthConfig& cfg);

}  // namespace lastmile
