#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mapex/grid.hpp"
#include "mapex/metrics.hpp"
#include "mapex/path_length.hpp"
#include "mapex/planner.hpp"
#include "mapex/predictor.hpp"
#include "mapex/sensing.hpp"

namespace mapex {

enum class TerminationCause { GoalReached, FrontierExhausted, StepCap, Sealed };

std::string to_string(TerminationCause cause);

struct MissionConfig {
  OccupancyGrid truth;
  std::string map_id = "map";
  PlannerKind planner = PlannerKind::NearestFrontier;
  // nullptr runs the predictor-free path: the planning map is the raw
  // observation map and no prediction or overlay step happens at all.
  std::shared_ptr<const Predictor> predictor = std::make_shared<NullPredictor>();
  ThresholdConfig thresholds = ThresholdConfig::defaults();
  double coverage_goal = 0.98;
  SensorRig rig;
  std::optional<Coord> start;  // default: first Free interior cell in row-major order
  std::uint64_t seed = 0;
  std::int64_t step_cap = 0;  // 0 means 10 * height * width
  bool failsafe = true;
  double f1_floor = 0.8;  // success also requires final F1 >= this

  std::int64_t effective_step_cap() const;
  // Throws ConfigError / PreconditionError.
  void validate() const;
};

// First Free cell scanning row-major from (1, 1). Throws PreconditionError if none.
Coord top_left_interior_free(const OccupancyGrid& truth);

struct StepEntry {
  std::int64_t step = 0;  // moves made so far
  Coord pose;
  PathLength travelled;
  double coverage = 0.0;
  std::int64_t frontier_size = 0;
  bool failsafe = false;  // the move leaving this pose was planned on observations only

  friend bool operator==(const StepEntry&, const StepEntry&) = default;
};

struct MissionRecord {
  std::string map_id;
  std::string planner;
  std::string predictor;
  std::uint64_t seed = 0;
  std::vector<StepEntry> entries;
  PathLength travelled;  // mapping time = travelled.value()
  std::int64_t steps = 0;
  double coverage = 0.0;
  F1Score f1;
  bool success = false;
  TerminationCause cause = TerminationCause::StepCap;
  std::int64_t failsafe_activations = 0;

  double mapping_time() const { return travelled.value(); }
  std::vector<Coord> trajectory() const;
};

// Sense, accumulate, predict, threshold, overlay, check coverage, plan, move;
// repeated until the coverage goal is met or the mission stalls.
MissionRecord run_mission(const MissionConfig& cfg);

// Line-delimited key=value text: one "step ..." line per entry, then one
// "summary ..." line. Doubles are printed with 17 significant digits.
std::string format_record(const MissionRecord& record);
std::string format_summary_line(const MissionRecord& record);

// Tree-like random observation accumulation: a random Free root, then each new
// sense pose is a Free cell seen from a randomly chosen earlier pose.
// Returns the accumulated map after each of the first `poses` sense poses.
std::vector<ObservationMap> random_observation_tree(const OccupancyGrid& truth,
                                                    const SensorRig& rig, std::uint64_t seed,
                                                    int poses);

}  // namespace mapex
