#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lastmile/data.hpp"
#include "lastmile/errors.hpp"
#include "lastmile/scorer.hpp"
#include "lastmile/stop_stage.hpp"
#include "lastmile/trainer.hpp"
#include "lastmile/transition.hpp"
#include "lastmile/tsp.hpp"
#include "lastmile/types.hpp"
#include "lastmile/zone_stage.hpp"

namespace {

using namespace lastmile;

/// Flag combinations and empty inputs: exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out.flush()) throw Error("failed writing '" + path + "'");
}

Corpus load_nonempty(const std::string& path) {
  Corpus c = load_corpus(path);
  if (c.instances.empty()) throw UsageError("no routes in corpus '" + path + "'");
  return c;
}

/// Shared oracle budget flags. Defaults to an iteration cap so runs are
/// reproducible; an explicit --budget-secs adds a wall-clock deadline.
struct BudgetFlags {
  std::uint64_t iter_cap = 200000;
  double budget_secs = 0.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--iter-cap", iter_cap,
                    "Candidate-evaluation cap per solver call (0 = deadline only)")
        ->capture_default_str();
    cmd->add_option("--budget-secs", budget_secs,
                    "Wall-clock deadline per solver call in seconds (0 = cap only)")
        ->capture_default_str();
  }

  SolveBudget budget() const {
    if (iter_cap == 0 && budget_secs <= 0.0)
      throw UsageError("--iter-cap and --budget-secs cannot both be disabled");
    return {iter_cap, budget_secs};
  }
};

nlohmann::json budget_config(const BudgetFlags& b) {
  nlohmann::json cfg;
  cfg["iter_cap"] = b.iter_cap;
  cfg["budget_secs"] = b.budget_secs;
  return cfg;
}

WeightVector weights_from_artifact(const std::string& path, std::size_t expected) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("weights artifact '" + path + "': " + e.what());
  }
  try {
    WeightVector w{doc.at("weights").get<std::vector<double>>()};
    validate_weights(w, expected);
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("weights artifact '" + path + "': " + e.what());
  }
}

TransitionMatrix matrix_from_artifact(const std::string& path) {
  return transition_from_json(read_file(path));
}

std::string format_weight(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string join_weights(const WeightVector& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += format_weight(w[i]);
  }
  return out;
}

// generate ------------------------------------------------------------

struct GenerateArgs {
  SynthConfig cfg;
  std::string out;
};

void run_generate(const GenerateArgs& a) {
  Corpus c = generate_synthetic(a.cfg);
  save_corpus(c, a.out);
  std::cout << "wrote " << c.size() << " routes to " << a.out << "\n";
}

// split ---------------------------------------------------------------

struct SplitArgs {
  std::string corpus;
  SplitSpec spec;
  std::string out_train;
  std::string out_test;
};

void run_split(const SplitArgs& a) {
  Corpus c = load_nonempty(a.corpus);
  auto [train, test] = stratified_split(c, a.spec);
  save_corpus(train, a.out_train);
  save_corpus(test, a.out_test);
  std::cout << "split " << c.size() << " routes into " << train.size() << " train / "
            << test.size() << " test\n";
}

// estimate ------------------------------------------------------------

struct EstimateArgs {
  std::string corpus;
  QualityWeights v;
  double floor = 1e-6;
  std::string out;
};

void run_estimate(const EstimateArgs& a) {
  Corpus c = load_nonempty(a.corpus);
  TransitionMatrix t = estimate_transitions(c.instances, c.zone_index, a.v, a.floor);

  nlohmann::json doc = nlohmann::json::parse(transition_to_json(t));
  nlohmann::json cfg;
  cfg["v_high"] = a.v.high;
  cfg["v_medium"] = a.v.medium;
  cfg["v_low"] = a.v.low;
  cfg["floor"] = a.floor;
  doc["config"] = std::move(cfg);
  write_file(a.out, doc.dump() + "\n");
  std::cout << "estimated " << t.zone_index.size() << "x" << t.zone_index.size()
            << " transition matrix from " << c.size() << " routes\n";
}

// train ---------------------------------------------------------------

struct TrainArgs {
  std::string stage;
  std::string corpus;
  std::string matrix;
  std::vector<double> init;
  double lr = 1e-5;
  std::size_t epochs = 1;
  std::uint64_t seed = 0;
  bool shuffle = false;
  BudgetFlags budget;
  std::string out;
  std::string trace_out;
};

void print_epoch_table(const TrainTrace& trace) {
  std::cout << "epoch  updates  mean_gap      weights\n";
  std::cout << "    0        -         -      " << join_weights(trace.snapshots[0]) << "\n";
  for (std::size_t e = 0; e < trace.epochs.size(); ++e) {
    char line[64];
    std::snprintf(line, sizeof(line), "%5zu  %7zu  %8.4f      ", e + 1,
                  trace.epochs[e].updates, trace.epochs[e].mean_gap);
    std::cout << line << join_weights(trace.snapshots[e + 1]) << "\n";
  }
}

void run_train(const TrainArgs& a) {
  Corpus c = load_nonempty(a.corpus);

  TrainConfig cfg;
  cfg.learning_rate = a.lr;
  cfg.epochs = a.epochs;
  cfg.budget = SolveBudget::iterations(a.budget.iter_cap);
  if (cfg.budget.max_iterations == 0)
    throw UsageError("training requires a positive --iter-cap");
  cfg.shuffle = a.shuffle;
  cfg.seed = a.seed;

  std::vector<TrainExample> examples;
  if (a.stage == "zone") {
    if (a.matrix.empty()) throw UsageError("--stage zone requires --matrix");
    const TransitionMatrix t = matrix_from_artifact(a.matrix);
    cfg.initial = a.init.empty() ? WeightVector::zone_default() : WeightVector{a.init};
    validate_weights(cfg.initial, 2);
    examples = zone_examples(c.instances, t);
  } else {
    cfg.initial = a.init.empty() ? WeightVector::stop_default() : WeightVector{a.init};
    validate_weights(cfg.initial, kStopFeatureCount);
    examples = stop_examples(c.instances);
  }
  if (examples.empty()) throw UsageError("no trainable routes in corpus '" + a.corpus + "'");

  const TrainResult result = train(examples, cfg);
  print_epoch_table(result.trace);

  nlohmann::json doc;
  doc["stage"] = a.stage;
  doc["weights"] = result.weights.values;
  nlohmann::json jc;
  jc["lr"] = a.lr;
  jc["epochs"] = a.epochs;
  jc["seed"] = a.seed;
  jc["shuffle"] = a.shuffle;
  jc["iter_cap"] = a.budget.iter_cap;
  jc["initial_weights"] = cfg.initial.values;
  doc["config"] = std::move(jc);
  write_file(a.out, doc.dump() + "\n");
  if (!a.trace_out.empty()) write_file(a.trace_out, trace_to_json(result.trace) + "\n");
}

// predict -------------------------------------------------------------

struct PredictArgs {
  std::string corpus;
  std::string matrix;
  std::string zone_weights;
  std::string stop_weights;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  BudgetFlags budget;
  std::string out;
};

struct Prediction {
  std::vector<std::string> stops;
  std::vector<std::string> zones;
};

Prediction predict_one(const RoutingInstance& inst, const TransitionMatrix& t,
                       const WeightVector& zone_w, const WeightVector& stop_w,
                       const SolveBudget& budget, std::uint64_t seed) {
  const ZoneIndex zi = instance_zone_index(inst);
  const ZoneGeometry g = build_geometry(inst, zi);
  const ZoneOrdering zo = order_zones(inst, zi, g, t, zone_w, budget, seed);
  const std::vector<std::size_t> o = order_index_of(inst, zi, zo);
  const Tour tour = order_stops(inst, o, stop_w, budget, seed);

  Prediction p;
  p.stops.reserve(tour.order.size());
  for (std::size_t s : tour.order) p.stops.push_back(inst.stops[s].id);
  p.zones.reserve(zo.sequence.size());
  for (std::size_t z : zo.sequence) p.zones.push_back(zi.id(z));
  return p;
}

void run_predict(const PredictArgs& a) {
  Corpus c = load_nonempty(a.corpus);
  const TransitionMatrix t = matrix_from_artifact(a.matrix);
  const WeightVector zone_w = a.zone_weights.empty()
                                  ? WeightVector::zone_default()
                                  : weights_from_artifact(a.zone_weights, 2);
  const WeightVector stop_w =
      a.stop_weights.empty() ? WeightVector::stop_default()
                             : weights_from_artifact(a.stop_weights, kStopFeatureCount);
  const SolveBudget budget = a.budget.budget();

  const std::size_t n = c.instances.size();
  std::vector<Prediction> results(n);
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const std::size_t jobs = std::max<std::size_t>(1, a.jobs);
  auto worker = [&]() {
    for (std::size_t i = cursor.fetch_add(1); i < n; i = cursor.fetch_add(1)) {
      try {
        results[i] = predict_one(c.instances[i], t, zone_w, stop_w, budget, a.seed + i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t k = 0; k < jobs; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  nlohmann::json doc;
  nlohmann::json cfg = budget_config(a.budget);
  cfg["seed"] = a.seed;
  cfg["zone_weights"] = zone_w.values;
  cfg["stop_weights"] = stop_w.values;
  doc["config"] = std::move(cfg);
  nlohmann::json preds;
  for (std::size_t i = 0; i < n; ++i) {
    nlohmann::json row;
    row["stops"] = results[i].stops;
    row["zones"] = results[i].zones;
    preds[c.instances[i].route_id] = std::move(row);
  }
  doc["predictions"] = std::move(preds);
  write_file(a.out, doc.dump() + "\n");
  std::cout << "predicted " << n << " routes\n";
}

// score ---------------------------------------------------------------

struct ScoreArgs {
  std::string corpus;
  std::string predictions;
  std::string level = "stop";
  std::size_t jobs = 1;
  std::string out;
  std::string summary_out;
  std::string histogram_out;
  std::size_t bins = 20;
  double max_score = 0.1;
};

ScoreRow score_one_stop(const RoutingInstance& inst, const nlohmann::json& pred) {
  std::unordered_map<std::string, std::size_t> stop_index;
  for (std::size_t i = 0; i < inst.stops.size(); ++i) stop_index[inst.stops[i].id] = i;
  Tour tour;
  for (const auto& id : pred.at("stops")) {
    auto it = stop_index.find(id.get<std::string>());
    if (it == stop_index.end())
      throw ValidationError("route '" + inst.route_id + "': predicted stop '" +
                            id.get<std::string>() + "' is not in the instance");
    tour.order.push_back(it->second);
  }
  ScoreRow row = score_stops(inst, tour);
  return row;
}

ScoreRow score_one_zone(const RoutingInstance& inst, const nlohmann::json& pred) {
  const ZoneIndex zi = instance_zone_index(inst);
  const ZoneGeometry g = build_geometry(inst, zi);

  const std::vector<std::string> actual_ids = zone_sequence_of(inst);
  std::vector<std::size_t> actual;
  actual.reserve(actual_ids.size());
  for (const std::string& z : actual_ids) actual.push_back(zi.at(z));

  std::vector<std::size_t> predicted;
  for (const auto& id : pred.at("zones")) predicted.push_back(zi.at(id.get<std::string>()));

  ScoreRow row = score_zones(inst.route_id, actual, predicted, g.d);
  row.quality = inst.quality ? to_string(*inst.quality) : "";
  return row;
}

void run_score(const ScoreArgs& a) {
  Corpus c = load_nonempty(a.corpus);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(a.predictions));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("predictions '" + a.predictions + "': " + e.what());
  }
  const auto& preds = doc.at("predictions");

  std::vector<const RoutingInstance*> scored;
  for (const RoutingInstance& inst : c.instances)
    if (preds.contains(inst.route_id)) scored.push_back(&inst);
  if (scored.empty()) throw UsageError("predictions cover no route of the corpus");

  std::vector<ScoreRow> rows(scored.size());
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const bool zone_level = a.level == "zone";
  auto worker = [&]() {
    for (std::size_t i = cursor.fetch_add(1); i < scored.size(); i = cursor.fetch_add(1)) {
      try {
        const auto& pred = preds.at(scored[i]->route_id);
        rows[i] = zone_level ? score_one_zone(*scored[i], pred)
                             : score_one_stop(*scored[i], pred);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, a.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < jobs; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  const std::string csv = score_csv(rows);
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    write_file(a.out, csv);
  }
  if (!a.summary_out.empty()) write_file(a.summary_out, score_summary_json(rows) + "\n");
  if (!a.histogram_out.empty())
    write_file(a.histogram_out, score_histogram_csv(rows, a.bins, a.max_score));
  std::cerr << "mean score over " << rows.size() << " routes: " << mean_score(rows) << "\n";
}

// report --------------------------------------------------------------

struct ReportArgs {
  std::string corpus;
  std::string out;
};

void run_report(const ReportArgs& a) {
  Corpus c = load_nonempty(a.corpus);
  const std::string csv = violation_report_csv(violation_report(c.instances));
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    write_file(a.out, csv);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage delivery route prediction: zone ordering learned from "
               "history, then stop sequencing under zone-order penalties"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* cmd_gen = app.add_subcommand("generate", "Generate a synthetic route corpus");
  cmd_gen->add_option("--out", gen.out, "Corpus output path (JSON Lines)")->required();
  cmd_gen->add_option("--seed", gen.cfg.seed, "RNG seed")->capture_default_str();
  cmd_gen->add_option("--instances", gen.cfg.n_instances, "Number of routes")
      ->capture_default_str();
  cmd_gen->add_option("--grid", gen.cfg.grid_size, "Zone grid side length")
      ->capture_default_str();
  cmd_gen->add_option("--min-stops", gen.cfg.min_stops_per_zone, "Min stops per zone")
      ->capture_default_str();
  cmd_gen->add_option("--max-stops", gen.cfg.max_stops_per_zone, "Max stops per zone")
      ->capture_default_str();
  cmd_gen->add_option("--zone-presence", gen.cfg.zone_presence,
                      "Probability that a zone appears in an instance")
      ->capture_default_str();
  cmd_gen->add_option("--preference-strength", gen.cfg.preference_strength,
                      "0 = planner follows distance, 1 = planner follows hidden habit")
      ->capture_default_str();
  cmd_gen->add_option("--frac-high", gen.cfg.frac_high, "Fraction of high-quality routes")
      ->capture_default_str();
  cmd_gen->add_option("--frac-medium", gen.cfg.frac_medium,
                      "Fraction of medium-quality routes")
      ->capture_default_str();
  cmd_gen->add_option("--medium-swaps", gen.cfg.medium_swaps,
                      "Perturbation swaps for medium routes")
      ->capture_default_str();
  cmd_gen->add_option("--low-swaps", gen.cfg.low_swaps, "Perturbation swaps for low routes")
      ->capture_default_str();
  cmd_gen->callback([&]() { run_generate(gen); });

  SplitArgs split;
  auto* cmd_split = app.add_subcommand("split", "Stratified train/test split by quality");
  cmd_split->add_option("--corpus", split.corpus, "Corpus path")->required();
  cmd_split->add_option("--test-fraction", split.spec.test_fraction,
                        "Per-label fraction routed to the test set")
      ->capture_default_str();
  cmd_split->add_option("--seed", split.spec.seed, "Shuffle seed")->capture_default_str();
  cmd_split->add_option("--out-train", split.out_train, "Train corpus output path")
      ->required();
  cmd_split->add_option("--out-test", split.out_test, "Test corpus output path")->required();
  cmd_split->callback([&]() { run_split(split); });

  EstimateArgs est;
  auto* cmd_est = app.add_subcommand(
      "estimate", "Estimate the zone transition matrix from labeled history");
  cmd_est->add_option("--corpus", est.corpus, "Corpus path")->required();
  cmd_est->add_option("--v-high", est.v.high, "Count weight of high-quality routes")
      ->capture_default_str();
  cmd_est->add_option("--v-medium", est.v.medium, "Count weight of medium-quality routes")
      ->capture_default_str();
  cmd_est->add_option("--v-low", est.v.low, "Count weight of low-quality routes")
      ->capture_default_str();
  cmd_est->add_option("--floor", est.floor, "Probability floor")->capture_default_str();
  cmd_est->add_option("--out", est.out, "Matrix artifact output path")->required();
  cmd_est->callback([&]() { run_estimate(est); });

  TrainArgs tr;
  auto* cmd_train =
      app.add_subcommand("train", "Train stage weights with the structured perceptron");
  cmd_train->add_option("--stage", tr.stage, "Stage to train")
      ->check(CLI::IsMember({"zone", "stop"}))
      ->required();
  cmd_train->add_option("--corpus", tr.corpus, "Training corpus path")->required();
  cmd_train->add_option("--matrix", tr.matrix, "Transition matrix artifact (zone stage)");
  cmd_train->add_option("--init", tr.init, "Initial weights (default: stage preset)");
  cmd_train->add_option("--lr", tr.lr, "Learning rate")->capture_default_str();
  cmd_train->add_option("--epochs", tr.epochs, "Training epochs")->capture_default_str();
  cmd_train->add_option("--seed", tr.seed, "Seed for --shuffle and the oracle")
      ->capture_default_str();
  cmd_train->add_flag("--shuffle", tr.shuffle, "Reshuffle example order each epoch");
  tr.budget.attach(cmd_train);
  cmd_train->add_option("--out", tr.out, "Weights artifact output path")->required();
  cmd_train->add_option("--trace-out", tr.trace_out, "Optional training trace JSON path");
  cmd_train->callback([&]() { run_train(tr); });

  PredictArgs pred;
  auto* cmd_pred = app.add_subcommand("predict", "Predict stop sequences for a corpus");
  cmd_pred->add_option("--corpus", pred.corpus, "Corpus path")->required();
  cmd_pred->add_option("--matrix", pred.matrix, "Transition matrix artifact")->required();
  cmd_pred->add_option("--zone-weights", pred.zone_weights,
                       "Zone weights artifact (default: 1 1)");
  cmd_pred->add_option("--stop-weights", pred.stop_weights,
                       "Stop weights artifact (default: 2 1 2 4 2 4 6)");
  cmd_pred->add_option("--seed", pred.seed, "Base oracle seed")->capture_default_str();
  cmd_pred->add_option("--jobs", pred.jobs, "Worker threads")->capture_default_str();
  pred.budget.attach(cmd_pred);
  cmd_pred->add_option("--out", pred.out, "Predictions JSON output path")->required();
  cmd_pred->callback([&]() { run_predict(pred); });

  ScoreArgs sc;
  auto* cmd_score = app.add_subcommand("score", "Score predictions against actual routes");
  cmd_score->add_option("--corpus", sc.corpus, "Corpus path")->required();
  cmd_score->add_option("--predictions", sc.predictions, "Predictions JSON path")
      ->required();
  cmd_score->add_option("--level", sc.level, "Score stop or zone sequences")
      ->check(CLI::IsMember({"stop", "zone"}))
      ->capture_default_str();
  cmd_score->add_option("--jobs", sc.jobs, "Worker threads")->capture_default_str();
  cmd_score->add_option("--out", sc.out, "Score CSV path (default: stdout)");
  cmd_score->add_option("--summary-out", sc.summary_out, "Aggregate JSON path");
  cmd_score->add_option("--histogram-out", sc.histogram_out, "Histogram CSV path");
  cmd_score->add_option("--bins", sc.bins, "Histogram bin count")->capture_default_str();
  cmd_score->add_option("--max-score", sc.max_score, "Histogram upper bound")
      ->capture_default_str();
  cmd_score->callback([&]() { run_score(sc); });

  ReportArgs rep;
  auto* cmd_report = app.add_subcommand(
      "report", "Zone-order transition shares of historical routes, per quality label");
  cmd_report->add_option("--corpus", rep.corpus, "Corpus path")->required();
  cmd_report->add_option("--out", rep.out, "Report CSV path (default: stdout)");
  cmd_report->callback([&]() { run_report(rep); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const MissingLabel& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
