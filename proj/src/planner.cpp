#include "mapex/planner.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <utility>

namespace mapex {
namespace {

bool is_diagonal(Coord from, Coord to) { return from.row != to.row && from.col != to.col; }

std::optional<Decision> decision_for(const ShortestPaths& paths, Coord target) {
  return Decision{target, paths.path_to(target)};
}

}  // namespace

bool is_vacancy_edge(const OccupancyGrid& map, Coord from, Coord to) {
  if (!map.contains(from) || !map.contains(to)) return false;
  const int dr = to.row - from.row;
  const int dc = to.col - from.col;
  if ((dr == 0 && dc == 0) || std::abs(dr) > 1 || std::abs(dc) > 1) return false;
  if (map[from] != Cell::Free || map[to] != Cell::Free) return false;
  if (dr != 0 && dc != 0) {
    const bool corner_a = map[{from.row, to.col}] == Cell::Obstacle;
    const bool corner_b = map[{to.row, from.col}] == Cell::Obstacle;
    if (corner_a && corner_b) return false;
  }
  return true;
}

double ShortestPaths::distance_value(Coord c) const {
  if (!reachable(c)) return std::numeric_limits<double>::infinity();
  return distance[c].value();
}

std::vector<Coord> ShortestPaths::path_to(Coord target) const {
  if (!reachable(target)) {
    throw PreconditionError("no path from " + to_string(source) + " to " + to_string(target));
  }
  std::vector<Coord> path;
  for (Coord c = target; c != source;) {
    path.push_back(c);
    c = distance.coord(static_cast<std::size_t>(predecessor[c]));
  }
  return {path.rbegin(), path.rend()};
}

ShortestPaths shortest_paths(const OccupancyGrid& map, Coord source) {
  if (!map.contains(source) || map[source] != Cell::Free) {
    throw PreconditionError("shortest_paths source " + to_string(source) + " is not free");
  }
  ShortestPaths sp{source,
                   Grid<PathLength>(map.height(), map.width()),
                   Grid<std::uint8_t>(map.height(), map.width(), 0),
                   Grid<std::int32_t>(map.height(), map.width(), -1)};

  using Entry = std::pair<PathLength, std::size_t>;
  auto later = [](const Entry& a, const Entry& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(later)> open(later);
  Grid<std::uint8_t> settled(map.height(), map.width(), 0);

  sp.reached[source] = 1;
  open.push({PathLength{}, map.index(source)});
  while (!open.empty()) {
    const auto [dist, idx] = open.top();
    open.pop();
    const Coord here = map.coord(idx);
    if (settled[here]) continue;
    settled[here] = 1;
    for (Coord d : kNeighbours8) {
      const Coord next = here + d;
      if (!is_vacancy_edge(map, here, next) || settled[next]) continue;
      const PathLength candidate = dist + PathLength::step(is_diagonal(here, next));
      if (!sp.reached[next] || candidate < sp.distance[next]) {
        sp.reached[next] = 1;
        sp.distance[next] = candidate;
        sp.predecessor[next] = static_cast<std::int32_t>(idx);
        open.push({candidate, map.index(next)});
      }
    }
  }
  return sp;
}

Frontier detect_frontier(const OccupancyGrid& map) {
  Frontier out;
  for (int r = 0; r < map.height(); ++r) {
    for (int c = 0; c < map.width(); ++c) {
      const Coord here{r, c};
      if (map[here] != Cell::Free) continue;
      for (Coord d : kNeighbours4) {
        const Coord n = here + d;
        if (map.contains(n) && map[n] == Cell::Unknown) {
          out.push_back(here);
          break;
        }
      }
    }
  }
  return out;
}

Frontier reachable_frontier(const Frontier& frontier, const ShortestPaths& paths) {
  Frontier out;
  for (Coord c : frontier) {
    if (c != paths.source && paths.reachable(c)) out.push_back(c);
  }
  return out;
}

std::string to_string(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::Random: return "random";
    case PlannerKind::NearestFrontier: return "nearest";
    case PlannerKind::CostUtility: return "cost-utility";
  }
  return "unknown";
}

PlannerKind parse_planner_kind(const std::string& name) {
  if (name == "random") return PlannerKind::Random;
  if (name == "nearest") return PlannerKind::NearestFrontier;
  if (name == "cost-utility") return PlannerKind::CostUtility;
  throw ConfigError("unknown planner '" + name + "' (expected random, nearest or cost-utility)");
}

PlannerState::PlannerState(Coord pose_, OccupancyGrid planning_map_, std::uint64_t seed)
    : pose(pose_), planning_map(std::move(planning_map_)),
      paths(shortest_paths(planning_map, pose)), rng(seed) {}

void PlannerState::update(Coord new_pose, OccupancyGrid map) {
  pose = new_pose;
  planning_map = std::move(map);
  paths = shortest_paths(planning_map, pose);
}

std::int64_t exposure_reward(const OccupancyGrid& map, Coord v, const SensorRig& rig) {
  std::int64_t unknown = 0;
  for (const Reading& r : trace_beams(map, v, rig)) {
    if (r.category == Cell::Unknown) ++unknown;
  }
  return unknown;
}

std::optional<Decision> plan_random(PlannerState& state) {
  const Frontier targets = reachable_frontier(detect_frontier(state.planning_map), state.paths);
  if (targets.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, targets.size() - 1);
  return decision_for(state.paths, targets[pick(state.rng)]);
}

std::optional<Decision> plan_nearest_frontier(const PlannerState& state) {
  const Frontier targets = reachable_frontier(detect_frontier(state.planning_map), state.paths);
  if (targets.empty()) return std::nullopt;
  // Row-major iteration plus strict improvement keeps the smallest tied cell.
  Coord best = targets.front();
  for (Coord c : targets) {
    if (state.paths.distance[c] < state.paths.distance[best]) best = c;
  }
  return decision_for(state.paths, best);
}

std::optional<Decision> plan_cost_utility(const PlannerState& state, const SensorRig& rig) {
  const Frontier targets = reachable_frontier(detect_frontier(state.planning_map), state.paths);
  if (targets.empty()) return std::nullopt;
  Coord best = targets.front();
  std::int64_t best_reward = exposure_reward(state.planning_map, best, rig);
  for (Coord c : targets) {
    const std::int64_t reward = exposure_reward(state.planning_map, c, rig);
    if (compare_utility(reward, state.paths.distance[c], best_reward, state.paths.distance[best]) ==
        std::strong_ordering::greater) {
      best = c;
      best_reward = reward;
    }
  }
  return decision_for(state.paths, best);
}

std::optional<FailsafeDirective> failsafe_check(const PlannerState& state,
                                                const ObservationMap& obs) {
  if (!reachable_frontier(detect_frontier(state.planning_map), state.paths).empty()) {
    return std::nullopt;
  }
  if (state.planning_map == obs) return std::nullopt;
  if (!obs.contains(state.pose) || obs[state.pose] != Cell::Free) return std::nullopt;
  const ShortestPaths observed = shortest_paths(obs, state.pose);
  if (reachable_frontier(detect_frontier(obs), observed).empty()) return std::nullopt;
  return FailsafeDirective{obs};
}

Explorer::Explorer(PlannerKind kind, SensorRig rig, std::uint64_t seed, bool failsafe_enabled)
    : kind_(kind), rig_(rig), failsafe_enabled_(failsafe_enabled), seed_(seed) {}

std::optional<Decision> Explorer::decide(PlannerState& state) const {
  switch (kind_) {
    case PlannerKind::Random: return plan_random(state);
    case PlannerKind::NearestFrontier: return plan_nearest_frontier(state);
    case PlannerKind::CostUtility: return plan_cost_utility(state, rig_);
  }
  return std::nullopt;
}

StepChoice Explorer::next_step(Coord pose, const OccupancyGrid& planning_map,
                               const ObservationMap& obs) {
  StepChoice choice;
  if (!committed_.empty()) {
    if (is_vacancy_edge(planning_map, pose, committed_.front())) {
      choice.next = committed_.front();
      choice.waypoint = committed_.back();
      committed_.pop_front();
      return choice;
    }
    committed_.clear();
  }

  if (!state_) {
    state_.emplace(pose, planning_map, seed_);
  } else {
    state_->update(pose, planning_map);
  }
  choice.replanned = true;

  std::optional<Decision> decision = decide(*state_);
  if (!decision) {
    if (failsafe_enabled_) {
      if (auto directive = failsafe_check(*state_, obs)) {
        state_->update(pose, std::move(directive->fallback_map));
        decision = decide(*state_);
        choice.failsafe_used = decision.has_value();
      }
    }
    if (!decision) {
      const bool observed_open =
          obs.contains(pose) && obs[pose] == Cell::Free &&
          !reachable_frontier(detect_frontier(obs), shortest_paths(obs, pose)).empty();
      choice.stall = observed_open && obs != planning_map ? StallCause::Sealed
                                                          : StallCause::FrontierExhausted;
      return choice;
    }
  }

  choice.waypoint = decision->waypoint;
  choice.next = decision->path.front();
  if (kind_ == PlannerKind::Random) {
    committed_.assign(decision->path.begin() + 1, decision->path.end());
  }
  return choice;
}

}  // namespace mapex
