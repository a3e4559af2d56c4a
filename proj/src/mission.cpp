#include "mapex/mission.hpp"

#include <iomanip>
#include <random>
#include <sstream>

namespace mapex {

std::string to_string(TerminationCause cause) {
  switch (cause) {
    case TerminationCause::GoalReached: return "goal_reached";
    case TerminationCause::FrontierExhausted: return "frontier_exhausted";
    case TerminationCause::StepCap: return "step_cap";
    case TerminationCause::Sealed: return "sealed";
  }
  return "unknown";
}

std::int64_t MissionConfig::effective_step_cap() const {
  if (step_cap > 0) return step_cap;
  return 10 * static_cast<std::int64_t>(truth.height()) * truth.width();
}

void MissionConfig::validate() const {
  if (!(coverage_goal > 0.0 && coverage_goal <= 1.0)) {
    throw ConfigError("coverage goal must lie in (0, 1]");
  }
  if (step_cap < 0) throw ConfigError("step cap must be positive (0 selects the default)");
  thresholds.validate();
  rig.validate();
  if (truth.size() == 0) throw PreconditionError("mission map is empty");
  if (count_cells(truth, Cell::Unknown) != 0) {
    throw PreconditionError("mission map " + map_id + " contains Unknown cells");
  }
  if (start) {
    if (!truth.contains(*start) || truth[*start] != Cell::Free) {
      throw PreconditionError("start " + to_string(*start) + " is not free in " + map_id);
    }
  }
}

Coord top_left_interior_free(const OccupancyGrid& truth) {
  for (int r = 1; r + 1 < truth.height(); ++r) {
    for (int c = 1; c + 1 < truth.width(); ++c) {
      if (truth[{r, c}] == Cell::Free) return {r, c};
    }
  }
  throw PreconditionError("map has no free interior cell");
}

std::vector<Coord> MissionRecord::trajectory() const {
  std::vector<Coord> out;
  out.reserve(entries.size());
  for (const StepEntry& e : entries) out.push_back(e.pose);
  return out;
}

MissionRecord run_mission(const MissionConfig& cfg) {
  cfg.validate();
  const OccupancyGrid& truth = cfg.truth;
  const std::int64_t cap = cfg.effective_step_cap();

  MissionRecord record;
  record.map_id = cfg.map_id;
  record.planner = to_string(cfg.planner);
  record.predictor = cfg.predictor ? cfg.predictor->name() : "none";
  record.seed = cfg.seed;

  Coord pose = cfg.start ? *cfg.start : top_left_interior_free(truth);
  ObservationMap obs = empty_observation(truth.height(), truth.width());
  OccupancyGrid constructed;
  Explorer explorer(cfg.planner, cfg.rig, cfg.seed, cfg.failsafe);

  while (true) {
    accumulate_into(obs, sense(truth, pose, cfg.rig));
    constructed = cfg.predictor ? construct_map(*cfg.predictor, obs, cfg.thresholds) : obs;

    StepEntry entry;
    entry.step = record.steps;
    entry.pose = pose;
    entry.travelled = record.travelled;
    entry.coverage = known_fraction(constructed);
    entry.frontier_size = static_cast<std::int64_t>(detect_frontier(constructed).size());
    record.coverage = entry.coverage;

    if (entry.coverage >= cfg.coverage_goal) {
      record.cause = TerminationCause::GoalReached;
      record.entries.push_back(entry);
      break;
    }
    if (record.steps >= cap) {
      record.cause = TerminationCause::StepCap;
      record.entries.push_back(entry);
      break;
    }

    const StepChoice choice = explorer.next_step(pose, constructed, obs);
    entry.failsafe = choice.failsafe_used;
    record.entries.push_back(entry);
    if (choice.failsafe_used) ++record.failsafe_activations;
    if (!choice.next) {
      record.cause = choice.stall == StallCause::Sealed ? TerminationCause::Sealed
                                                        : TerminationCause::FrontierExhausted;
      break;
    }

    const Coord next = *choice.next;
    // Every neighbour of the pose has just been sensed, so this can only fire
    // on a planner bug.
    if (!truth.contains(next) || truth[next] != Cell::Free) {
      throw ConsistencyError("planner stepped into " + to_string(next) + " which is not free");
    }
    record.travelled += PathLength::step(next.row != pose.row && next.col != pose.col);
    pose = next;
    ++record.steps;
  }

  record.f1 = f1_score(constructed, truth);
  record.success = record.cause == TerminationCause::GoalReached && record.f1.f1 >= cfg.f1_floor;
  return record;
}

namespace {

std::ostream& put_double(std::ostream& os, double v) {
  return os << std::setprecision(17) << v;
}

}  // namespace

std::string format_summary_line(const MissionRecord& record) {
  std::ostringstream os;
  os << "summary map=" << record.map_id << " planner=" << record.planner
     << " predictor=" << record.predictor << " seed=" << record.seed
     << " steps=" << record.steps << " straight=" << record.travelled.straight
     << " diagonal=" << record.travelled.diagonal << " path_length=";
  put_double(os, record.mapping_time()) << " coverage=";
  put_double(os, record.coverage) << " f1=";
  put_double(os, record.f1.f1) << " precision=";
  put_double(os, record.f1.precision) << " recall=";
  put_double(os, record.f1.recall) << " success=" << (record.success ? 1 : 0)
                                   << " cause=" << to_string(record.cause)
                                   << " failsafe=" << record.failsafe_activations;
  return os.str();
}

std::string format_record(const MissionRecord& record) {
  std::ostringstream os;
  for (const StepEntry& e : record.entries) {
    os << "step=" << e.step << " row=" << e.pose.row << " col=" << e.pose.col << " path_length=";
    put_double(os, e.travelled.value()) << " coverage=";
    put_double(os, e.coverage) << " frontier=" << e.frontier_size
                               << " failsafe=" << (e.failsafe ? 1 : 0) << '\n';
  }
  os << format_summary_line(record) << '\n';
  return os.str();
}

std::vector<ObservationMap> random_observation_tree(const OccupancyGrid& truth,
                                                    const SensorRig& rig, std::uint64_t seed,
                                                    int poses) {
  if (poses < 1) throw PreconditionError("observation tree needs at least one pose");
  std::vector<Coord> free_cells;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth.cells()[i] == Cell::Free) free_cells.push_back(truth.coord(i));
  }
  if (free_cells.empty()) throw PreconditionError("map has no free cell to observe from");

  std::mt19937_64 rng(seed);
  auto pick = [&rng](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };

  ObservationMap obs = empty_observation(truth.height(), truth.width());
  std::vector<std::vector<Coord>> seen_free;  // per tree node
  std::vector<ObservationMap> snapshots;
  snapshots.reserve(static_cast<std::size_t>(poses));

  Coord pose = free_cells[pick(free_cells.size())];
  for (int i = 0; i < poses; ++i) {
    if (i > 0) {
      const auto& parent_view = seen_free[pick(seen_free.size())];
      pose = parent_view[pick(parent_view.size())];
    }
    const Readings readings = sense(truth, pose, rig);
    accumulate_into(obs, readings);
    std::vector<Coord> view;
    for (const Reading& r : readings) {
      if (r.category == Cell::Free) view.push_back(r.cell);
    }
    seen_free.push_back(std::move(view));  // never empty: the pose itself is Free
    snapshots.push_back(obs);
  }
  return snapshots;
}

}  // namespace mapex
