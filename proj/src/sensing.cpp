#include "mapex/sensing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace mapex {
namespace {

struct Direction {
  double dc;  // +col (east)
  double dr;  // +row (south)
};

double snap(double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }

Direction direction_for(double azimuth_deg) {
  const double rad = azimuth_deg * std::numbers::pi / 180.0;
  return {snap(std::cos(rad)), snap(-std::sin(rad))};
}

// When the beam count is a multiple of four the last three quarters are exact
// 90 degree rotations of the first, so the visible set keeps the rig's
// rotational symmetry bit for bit.
std::vector<Direction> beam_directions(const SensorRig& rig) {
  std::vector<Direction> dirs(static_cast<std::size_t>(rig.beam_count));
  const double spacing = rig.angular_spacing_deg();
  if (rig.beam_count % 4 != 0) {
    for (int k = 0; k < rig.beam_count; ++k) {
      dirs[static_cast<std::size_t>(k)] = direction_for(rig.first_beam_azimuth_deg + k * spacing);
    }
    return dirs;
  }
  const int quarter = rig.beam_count / 4;
  for (int k = 0; k < quarter; ++k) {
    Direction d = direction_for(rig.first_beam_azimuth_deg + k * spacing);
    for (int q = 0; q < 4; ++q) {
      dirs[static_cast<std::size_t>(k + q * quarter)] = d;
      d = {d.dr, -d.dc};  // +90 degrees
    }
  }
  return dirs;
}

void trace_one(const OccupancyGrid& map, Coord pose, Direction d, double range,
               Readings& out) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int step_c = d.dc > 0 ? 1 : (d.dc < 0 ? -1 : 0);
  const int step_r = d.dr > 0 ? 1 : (d.dr < 0 ? -1 : 0);
  const double delta_c = step_c != 0 ? 1.0 / std::abs(d.dc) : kInf;
  const double delta_r = step_r != 0 ? 1.0 / std::abs(d.dr) : kInf;
  // The beam starts at the cell centre, half a cell from either boundary.
  double next_c = delta_c * 0.5;
  double next_r = delta_r * 0.5;
  const double range_sq = range * range;

  Coord lead = pose;
  std::array<Coord, 3> touched{};
  while (true) {
    const double t = std::min(next_c, next_r);
    if (t > range) return;

    std::size_t n = 0;
    if (std::abs(next_c - next_r) <= 1e-9 * std::max(1.0, t)) {
      touched[n++] = {lead.row, lead.col + step_c};
      touched[n++] = {lead.row + step_r, lead.col};
      lead = {lead.row + step_r, lead.col + step_c};
      touched[n++] = lead;
      next_c += delta_c;
      next_r += delta_r;
    } else if (next_c < next_r) {
      lead.col += step_c;
      touched[n++] = lead;
      next_c += delta_c;
    } else {
      lead.row += step_r;
      touched[n++] = lead;
      next_r += delta_r;
    }

    bool stop = false;
    for (std::size_t i = 0; i < n; ++i) {
      const Coord cell = touched[i];
      const double dr = cell.row - pose.row;
      const double dc = cell.col - pose.col;
      if (!map.contains(cell) || dr * dr + dc * dc > range_sq) {
        stop = true;
        continue;
      }
      const Cell category = map[cell];
      out.push_back({cell, category});
      if (category == Cell::Obstacle) stop = true;
    }
    if (stop) return;
  }
}

}  // namespace

void SensorRig::validate() const {
  if (beam_count < 1) throw ConfigError("sensor rig needs at least one beam");
  if (!(range >= 0.0) || !std::isfinite(range)) throw ConfigError("sensor range must be finite and >= 0");
  if (!std::isfinite(first_beam_azimuth_deg)) throw ConfigError("beam azimuth must be finite");
}

Readings trace_beams(const OccupancyGrid& map, Coord pose, const SensorRig& rig) {
  rig.validate();
  if (!map.contains(pose)) throw PreconditionError("sensor pose " + to_string(pose) + " out of bounds");
  if (map[pose] == Cell::Obstacle) {
    throw PreconditionError("sensor pose " + to_string(pose) + " is inside an obstacle");
  }

  Readings out;
  out.push_back({pose, map[pose]});
  for (const Direction& d : beam_directions(rig)) trace_one(map, pose, d, rig.range, out);

  std::ranges::sort(out, {}, &Reading::cell);
  const auto dup = std::ranges::unique(out, {}, &Reading::cell);
  out.erase(dup.begin(), dup.end());
  return out;
}

Readings sense(const OccupancyGrid& truth, Coord pose, const SensorRig& rig) {
  if (truth.contains(pose) && truth[pose] != Cell::Free) {
    throw PreconditionError("sensor pose " + to_string(pose) + " is not free space");
  }
  return trace_beams(truth, pose, rig);
}

ObservationMap empty_observation(int height, int width) {
  return ObservationMap(height, width, Cell::Unknown);
}

std::size_t accumulate_into(ObservationMap& obs, const Readings& readings) {
  // Validate everything first so a rejected batch leaves obs untouched.
  for (const Reading& r : readings) {
    if (!obs.contains(r.cell)) {
      throw PreconditionError("reading at " + to_string(r.cell) + " is out of bounds");
    }
    if (r.category == Cell::Unknown) {
      throw PreconditionError("reading at " + to_string(r.cell) + " carries no information");
    }
    const Cell prior = obs[r.cell];
    if (prior != Cell::Unknown && prior != r.category) {
      throw ConsistencyError("reading at " + to_string(r.cell) +
                             " contradicts an earlier observation");
    }
  }
  std::size_t fresh = 0;
  for (const Reading& r : readings) {
    Cell& cell = obs[r.cell];
    if (cell == Cell::Unknown) {
      cell = r.category;
      ++fresh;
    }
  }
  return fresh;
}

ObservationMap accumulate(ObservationMap obs, const Readings& readings) {
  accumulate_into(obs, readings);
  return obs;
}

}  // namespace mapex
