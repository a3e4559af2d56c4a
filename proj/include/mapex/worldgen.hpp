#pragma once

#include <cstdint>
#include <vector>

#include "mapex/grid.hpp"
#include "mapex/grid_io.hpp"

namespace mapex {

// Rectangular single-floor layouts: a closed outer wall and rooms produced by
// recursive axis-aligned splits. Defaults target 64x64 maps with a narrow
// wall-fraction spread.
struct GeneratorConfig {
  std::uint64_t seed = 0;
  int height = 64;
  int width = 64;
  int min_room_side = 6;
  int door_width = 2;
  int min_split_depth = 4;
  int max_split_depth = 5;

  // Throws ConfigError.
  void validate() const;
};

// One interior wall: a straight run of cells [first, last] (same row or same
// column) with a door gap of door_width cells starting at door.
struct WallSegment {
  Coord first;
  Coord last;
  Coord door;
  int door_width = 0;

  bool horizontal() const { return first.row == last.row; }
};

struct Floorplan {
  OccupancyGrid grid;
  std::vector<WallSegment> walls;
  int split_depth = 0;
};

Floorplan generate_layout(const GeneratorConfig& config);
OccupancyGrid generate_floorplan(const GeneratorConfig& config);

// count grids from seeds seed, seed + 1, ...
std::vector<OccupancyGrid> generate_dataset(const GeneratorConfig& config, int count);

Metadata to_metadata(const GeneratorConfig& config);
GeneratorConfig config_from_metadata(const Metadata& meta);

}  // namespace mapex
