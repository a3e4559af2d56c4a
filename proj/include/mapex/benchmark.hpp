#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mapex/grid.hpp"
#include "mapex/mission.hpp"
#include "mapex/planner.hpp"
#include "mapex/predictor.hpp"

namespace mapex {

struct Dataset {
  std::string name;
  std::vector<std::string> map_ids;
  std::vector<OccupancyGrid> maps;
};

// Builds the predictor for one ground-truth map (the oracle needs it, the
// others ignore it).
struct PredictorChoice {
  std::string name;
  std::function<std::shared_ptr<const Predictor>(const OccupancyGrid& truth)> make;
};

PredictorChoice null_predictor_choice();
PredictorChoice oracle_predictor_choice();
// "null", "oracle" or "learned:PATH". Throws ConfigError.
PredictorChoice parse_predictor_choice(const std::string& spec);

struct BenchmarkSuite {
  std::vector<Dataset> datasets;
  std::vector<PlannerKind> planners;
  std::vector<PredictorChoice> predictors;
  ThresholdConfig thresholds = ThresholdConfig::defaults();
  double coverage_goal = 0.98;
  SensorRig rig;
  std::uint64_t seed = 0;
  int random_runs = 10;  // Random Exploration runs per map, seeds seed .. seed + random_runs - 1
  bool failsafe = true;
  double f1_floor = 0.8;
  std::int64_t step_cap = 0;
  int threads = 0;  // 0: hardware concurrency
};

struct RunRow {
  std::string dataset;
  std::string map_id;
  std::string planner;
  std::string predictor;
  std::uint64_t seed = 0;
  double path_length = 0.0;
  double coverage = 0.0;
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  bool success = false;
  std::string cause;
  std::int64_t steps = 0;

  friend bool operator==(const RunRow&, const RunRow&) = default;
};

// One planner x predictor x dataset cell. Reductions are relative to the
// observation-based Nearest Frontier run on the same map:
// 1 - time / baseline_time, with Random Exploration times averaged per map first.
struct SummaryRow {
  std::string dataset;
  std::string planner;
  std::string predictor;
  int maps = 0;
  double mean_time = 0.0;
  double median_time = 0.0;
  double mean_reduction = 0.0;
  double median_reduction = 0.0;
  double success_rate = 0.0;
  double mean_f1 = 0.0;
  double min_f1 = 0.0;
};

struct MapReduction {
  std::string dataset;
  std::string map_id;
  std::string planner;
  std::string predictor;
  double mapping_time = 0.0;
  double baseline_time = 0.0;
  double reduction = 0.0;
};

struct BenchmarkResult {
  std::vector<RunRow> runs;  // sorted by dataset, map, planner, predictor, seed
  std::vector<SummaryRow> summary;
  std::vector<MapReduction> reductions;
  std::vector<RunRow> baseline_runs;
};

// Throws PreconditionError on an empty suite.
BenchmarkResult run_benchmark(const BenchmarkSuite& suite);

RunRow to_run_row(const std::string& dataset, const MissionRecord& record);

std::string runs_csv(const std::vector<RunRow>& rows);
std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string reductions_csv(const std::vector<MapReduction>& rows);

// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

// F1 of raw observations versus the constructed map as the number of random
// sense poses grows.
struct F1CurvePoint {
  std::string map_id;
  int observations = 0;
  double baseline_f1 = 0.0;
  double predicted_f1 = 0.0;
};

std::vector<F1CurvePoint> evaluate_predictor_curve(const Dataset& heldout,
                                                   const PredictorChoice& predictor,
                                                   const ThresholdConfig& thresholds,
                                                   const SensorRig& rig,
                                                   const std::vector<int>& observation_counts,
                                                   std::uint64_t seed, int threads = 0);

std::string f1_curve_csv(const std::vector<F1CurvePoint>& points);

}  // namespace mapex
