#include "mapex/worldgen.hpp"

#include <random>
#include <string>

namespace mapex {
namespace {

struct Rect {
  int top, left, bottom, right;  // inclusive

  int height() const { return bottom - top + 1; }
  int width() const { return right - left + 1; }
};

class Splitter {
public:
  Splitter(const GeneratorConfig& config, Floorplan& plan)
      : config_(config), plan_(plan), rng_(config.seed) {}

  int draw_depth() {
    return std::uniform_int_distribution<int>(config_.min_split_depth,
                                              config_.max_split_depth)(rng_);
  }

  void split(const Rect& room, int depth_left) {
    if (depth_left <= 0) return;

    std::vector<int> columns = vertical_candidates(room);
    std::vector<int> rows = horizontal_candidates(room);
    if (columns.empty() && rows.empty()) return;

    // Cut across the longer side when the room is clearly elongated.
    bool vertical;
    if (columns.empty()) {
      vertical = false;
    } else if (rows.empty()) {
      vertical = true;
    } else if (4 * room.width() > 5 * room.height()) {
      vertical = true;
    } else if (4 * room.height() > 5 * room.width()) {
      vertical = false;
    } else {
      vertical = std::bernoulli_distribution(0.5)(rng_);
    }

    const auto& candidates = vertical ? columns : rows;
    const int at = candidates[pick(candidates.size())];
    if (vertical) {
      add_wall({room.top, at}, {room.bottom, at});
      split({room.top, room.left, room.bottom, at - 1}, depth_left - 1);
      split({room.top, at + 1, room.bottom, room.right}, depth_left - 1);
    } else {
      add_wall({at, room.left}, {at, room.right});
      split({room.top, room.left, at - 1, room.right}, depth_left - 1);
      split({at + 1, room.left, room.bottom, room.right}, depth_left - 1);
    }
  }

private:
  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  // A new wall may not end against a door gap of an enclosing wall, otherwise
  // it would plug that door.
  std::vector<int> vertical_candidates(const Rect& room) const {
    std::vector<int> out;
    const int m = config_.min_room_side;
    for (int c = room.left + m; c <= room.right - m; ++c) {
      if (grid()[{room.top - 1, c}] == Cell::Obstacle &&
          grid()[{room.bottom + 1, c}] == Cell::Obstacle) {
        out.push_back(c);
      }
    }
    return out;
  }

  std::vector<int> horizontal_candidates(const Rect& room) const {
    std::vector<int> out;
    const int m = config_.min_room_side;
    for (int r = room.top + m; r <= room.bottom - m; ++r) {
      if (grid()[{r, room.left - 1}] == Cell::Obstacle &&
          grid()[{r, room.right + 1}] == Cell::Obstacle) {
        out.push_back(r);
      }
    }
    return out;
  }

  void add_wall(Coord first, Coord last) {
    const Coord step = first.row == last.row ? Coord{0, 1} : Coord{1, 0};
    const int length = (last.row - first.row) + (last.col - first.col) + 1;
    for (Coord c = first; c <= last; c = c + step) grid()[c] = Cell::Obstacle;

    const int offset = static_cast<int>(pick(static_cast<std::size_t>(length - config_.door_width + 1)));
    const Coord door{first.row + step.row * offset, first.col + step.col * offset};
    Coord c = door;
    for (int i = 0; i < config_.door_width; ++i, c = c + step) grid()[c] = Cell::Free;
    plan_.walls.push_back({first, last, door, config_.door_width});
  }

  OccupancyGrid& grid() { return plan_.grid; }
  const OccupancyGrid& grid() const { return plan_.grid; }

  const GeneratorConfig& config_;
  Floorplan& plan_;
  std::mt19937_64 rng_;
};

std::string config_error(const char* what) { return std::string("invalid generator config: ") + what; }

}  // namespace

void GeneratorConfig::validate() const {
  if (min_room_side < 3) throw ConfigError(config_error("min_room_side must be >= 3"));
  if (door_width < 1) throw ConfigError(config_error("door_width must be >= 1"));
  if (door_width > min_room_side) {
    throw ConfigError(config_error("door_width must not exceed min_room_side"));
  }
  if (height < 2 * min_room_side || width < 2 * min_room_side) {
    throw ConfigError(config_error("height and width must be >= 2 * min_room_side"));
  }
  if (min_split_depth < 0 || max_split_depth < min_split_depth) {
    throw ConfigError(config_error("split depth range must satisfy 0 <= min <= max"));
  }
}

Floorplan generate_layout(const GeneratorConfig& config) {
  config.validate();
  Floorplan plan;
  plan.grid = OccupancyGrid(config.height, config.width, Cell::Free);
  auto& grid = plan.grid;
  for (int c = 0; c < config.width; ++c) {
    grid[{0, c}] = Cell::Obstacle;
    grid[{config.height - 1, c}] = Cell::Obstacle;
  }
  for (int r = 0; r < config.height; ++r) {
    grid[{r, 0}] = Cell::Obstacle;
    grid[{r, config.width - 1}] = Cell::Obstacle;
  }

  Splitter splitter(config, plan);
  plan.split_depth = splitter.draw_depth();
  splitter.split({1, 1, config.height - 2, config.width - 2}, plan.split_depth);
  return plan;
}

OccupancyGrid generate_floorplan(const GeneratorConfig& config) {
  return generate_layout(config).grid;
}

std::vector<OccupancyGrid> generate_dataset(const GeneratorConfig& config, int count) {
  if (count < 1) throw PreconditionError("generate_dataset needs count >= 1");
  config.validate();
  std::vector<OccupancyGrid> out;
  out.reserve(static_cast<std::size_t>(count));
  GeneratorConfig cfg = config;
  for (int i = 0; i < count; ++i) {
    cfg.seed = config.seed + static_cast<std::uint64_t>(i);
    out.push_back(generate_floorplan(cfg));
  }
  return out;
}

Metadata to_metadata(const GeneratorConfig& config) {
  return {
      {"generator", "bsp"},
      {"seed", std::to_string(config.seed)},
      {"height", std::to_string(config.height)},
      {"width", std::to_string(config.width)},
      {"min_room_side", std::to_string(config.min_room_side)},
      {"door_width", std::to_string(config.door_width)},
      {"min_split_depth", std::to_string(config.min_split_depth)},
      {"max_split_depth", std::to_string(config.max_split_depth)},
  };
}

GeneratorConfig config_from_metadata(const Metadata& meta) {
  GeneratorConfig cfg;
  auto read_int = [&](const char* key, int& dst) {
    if (auto it = meta.find(key); it != meta.end()) {
      try {
        dst = std::stoi(it->second);
      } catch (const std::exception&) {
        throw FormatError(std::string("metadata key ") + key + " is not an integer");
      }
    }
  };
  if (auto it = meta.find("seed"); it != meta.end()) {
    try {
      cfg.seed = std::stoull(it->second);
    } catch (const std::exception&) {
      throw FormatError("metadata key seed is not an unsigned integer");
    }
  }
  read_int("height", cfg.height);
  read_int("width", cfg.width);
  read_int("min_room_side", cfg.min_room_side);
  read_int("door_width", cfg.door_width);
  read_int("min_split_depth", cfg.min_split_depth);
  read_int("max_split_depth", cfg.max_split_depth);
  return cfg;
}

}  // namespace mapex
