#pragma once

#include <vector>

#include "mapex/grid.hpp"

namespace mapex {

// Fixed ring of range sensors around the agent. Azimuth 0 points east (+col),
// angles grow counter-clockwise (towards -row).
struct SensorRig {
  int beam_count = 16;
  double range = 20.0;  // cells, measured centre to centre
  double first_beam_azimuth_deg = 0.0;

  double angular_spacing_deg() const { return 360.0 / beam_count; }
  // Throws ConfigError.
  void validate() const;
};

struct Reading {
  Coord cell;
  Cell category;

  friend bool operator==(const Reading&, const Reading&) = default;
};

// Readings sorted row-major, one per cell.
using Readings = std::vector<Reading>;

// Traces every beam from the centre of `pose` over `map`. A beam reports each
// cell it touches (both side cells and the diagonal one when it passes exactly
// through a lattice corner) and stops after the first step that touches an
// Obstacle, or at the first cell whose centre lies beyond range. The pose is
// reported too. Cells other than Obstacle do not block, so the same routine
// serves for truth maps and for partially known planning maps.
// Requires map[pose] != Obstacle and pose in bounds (PreconditionError).
Readings trace_beams(const OccupancyGrid& map, Coord pose, const SensorRig& rig);

// Sensor model over ground truth: requires truth[pose] == Free.
Readings sense(const OccupancyGrid& truth, Coord pose, const SensorRig& rig);

// Cells observed so far; Unknown everywhere else.
using ObservationMap = OccupancyGrid;

ObservationMap empty_observation(int height, int width);

// Union of prior observations and new readings. Throws ConsistencyError when a
// reading contradicts an already-observed cell, PreconditionError when a
// reading is out of bounds or Unknown.
ObservationMap accumulate(ObservationMap obs, const Readings& readings);

// In-place variant; returns the number of newly observed cells.
std::size_t accumulate_into(ObservationMap& obs, const Readings& readings);

}  // namespace mapex
