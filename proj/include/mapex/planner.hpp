#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mapex/grid.hpp"
#include "mapex/path_length.hpp"
#include "mapex/sensing.hpp"

namespace mapex {

// The eight moves in a fixed order: orthogonal first, then diagonal.
inline constexpr Coord kNeighbours8[8] = {{-1, 0}, {0, 1},  {1, 0},  {0, -1},
                                          {-1, 1}, {1, 1},  {1, -1}, {-1, -1}};
inline constexpr Coord kNeighbours4[4] = {{-1, 0}, {0, 1}, {1, 0}, {0, -1}};

// Edge of the vacancy graph: both cells Free, 8-adjacent, and a diagonal move
// must not squeeze between two Obstacle corner cells.
bool is_vacancy_edge(const OccupancyGrid& map, Coord from, Coord to);

struct ShortestPaths {
  Coord source;
  Grid<PathLength> distance;
  Grid<std::uint8_t> reached;
  Grid<std::int32_t> predecessor;  // flat index, -1 for source and unreached cells

  bool reachable(Coord c) const { return reached.contains(c) && reached[c]; }
  // +infinity when unreachable.
  double distance_value(Coord c) const;
  // Cells after the source up to and including target; empty if target is the
  // source. Throws PreconditionError when target is unreachable.
  std::vector<Coord> path_to(Coord target) const;
};

// Dijkstra over the vacancy graph. Throws PreconditionError unless source is Free.
ShortestPaths shortest_paths(const OccupancyGrid& map, Coord source);

// Free cells with at least one Unknown 4-neighbour, in row-major order.
using Frontier = std::vector<Coord>;
Frontier detect_frontier(const OccupancyGrid& map);

// Frontier cells reachable from the source, excluding the source itself.
Frontier reachable_frontier(const Frontier& frontier, const ShortestPaths& paths);

enum class PlannerKind { Random, NearestFrontier, CostUtility };

std::string to_string(PlannerKind kind);
// Accepts "random", "nearest", "cost-utility". Throws ConfigError.
PlannerKind parse_planner_kind(const std::string& name);

struct Decision {
  Coord waypoint;
  std::vector<Coord> path;  // from the pose (exclusive) to the waypoint (inclusive)
};

// What the planners decide from. The planning map is the constructed map, or
// the observation map when prediction is off or the fail-safe has fired.
struct PlannerState {
  Coord pose;
  OccupancyGrid planning_map;
  ShortestPaths paths;
  std::mt19937_64 rng;

  PlannerState(Coord pose, OccupancyGrid planning_map, std::uint64_t seed);
  // Replaces the planning map and re-solves shortest paths from pose.
  void update(Coord new_pose, OccupancyGrid map);
};

// Unknown cells of `map` visible from v under the rig, Unknown treated as transparent.
std::int64_t exposure_reward(const OccupancyGrid& map, Coord v, const SensorRig& rig);

// Uniform draw over the reachable frontier. nullopt when it is empty.
std::optional<Decision> plan_random(PlannerState& state);

// Minimum shortest-path distance, ties to the row-major smallest cell.
std::optional<Decision> plan_nearest_frontier(const PlannerState& state);

// Maximum exposure_reward(v) / (1 + dist(v)), ties to the row-major smallest cell.
std::optional<Decision> plan_cost_utility(const PlannerState& state, const SensorRig& rig);

// Issued when the planning map offers no reachable frontier but the
// observation-only map still does: the next waypoint is planned on observations.
struct FailsafeDirective {
  OccupancyGrid fallback_map;
};

std::optional<FailsafeDirective> failsafe_check(const PlannerState& state,
                                                const ObservationMap& obs);

enum class StallCause { None, FrontierExhausted, Sealed };

struct StepChoice {
  std::optional<Coord> next;
  std::optional<Coord> waypoint;
  bool failsafe_used = false;
  bool replanned = false;
  StallCause stall = StallCause::None;
};

// Per-mission planning policy. Greedy planners replan every step; Random
// Exploration commits to its whole path and replans when it is used up or
// blocked by newly revealed cells.
class Explorer {
public:
  Explorer(PlannerKind kind, SensorRig rig, std::uint64_t seed, bool failsafe_enabled = true);

  StepChoice next_step(Coord pose, const OccupancyGrid& planning_map, const ObservationMap& obs);

  PlannerKind kind() const { return kind_; }

private:
  std::optional<Decision> decide(PlannerState& state) const;

  PlannerKind kind_;
  SensorRig rig_;
  bool failsafe_enabled_;
  std::uint64_t seed_;
  std::optional<PlannerState> state_;
  std::deque<Coord> committed_;
};

}  // namespace mapex
