#include "mapex/grid.hpp"

#include <algorithm>

namespace mapex {

std::string to_string(Coord c) {
  return "(" + std::to_string(c.row) + ", " + std::to_string(c.col) + ")";
}

OneHotGrid::OneHotGrid(int height, int width)
    : height_(height), width_(width),
      data_(static_cast<std::size_t>(kCellCategoryCount) * static_cast<std::size_t>(height) *
                static_cast<std::size_t>(width),
            0.0f) {
  if (height < 0 || width < 0) throw ShapeError("negative grid dimension");
}

OneHotGrid encode_one_hot(const OccupancyGrid& grid) {
  OneHotGrid encoded(grid.height(), grid.width());
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) {
      encoded.at(grid[{r, c}], {r, c}) = 1.0f;
    }
  }
  return encoded;
}

OccupancyGrid decode_one_hot(const OneHotGrid& encoded) {
  OccupancyGrid grid(encoded.height(), encoded.width(), Cell::Unknown);
  constexpr Cell channels[] = {Cell::Free, Cell::Obstacle, Cell::Unknown};
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) {
      int hot = 0;
      for (Cell ch : channels) {
        const float v = encoded.at(ch, {r, c});
        if (v == 1.0f) {
          grid[{r, c}] = ch;
          ++hot;
        } else if (v != 0.0f) {
          hot = -1;
          break;
        }
      }
      if (hot != 1) {
        throw PreconditionError("cell " + to_string({r, c}) + " is not one-hot");
      }
    }
  }
  return grid;
}

std::size_t count_cells(const OccupancyGrid& grid, Cell category) {
  return static_cast<std::size_t>(std::ranges::count(grid.cells(), category));
}

double fraction_of_walls(const OccupancyGrid& grid) {
  if (grid.size() == 0) throw PreconditionError("fraction_of_walls on an empty grid");
  if (count_cells(grid, Cell::Unknown) != 0) {
    throw PreconditionError("fraction_of_walls requires a fully known grid");
  }
  return static_cast<double>(count_cells(grid, Cell::Obstacle)) /
         static_cast<double>(grid.size());
}

double known_fraction(const OccupancyGrid& grid) {
  if (grid.size() == 0) return 0.0;
  return static_cast<double>(grid.size() - count_cells(grid, Cell::Unknown)) /
         static_cast<double>(grid.size());
}

bool is_ground_truth(const OccupancyGrid& grid) {
  if (grid.height() < 1 || grid.width() < 1) return false;
  if (count_cells(grid, Cell::Unknown) != 0) return false;
  const int last_row = grid.height() - 1;
  const int last_col = grid.width() - 1;
  for (int c = 0; c <= last_col; ++c) {
    if (grid[{0, c}] != Cell::Obstacle || grid[{last_row, c}] != Cell::Obstacle) return false;
  }
  for (int r = 0; r <= last_row; ++r) {
    if (grid[{r, 0}] != Cell::Obstacle || grid[{r, last_col}] != Cell::Obstacle) return false;
  }
  return true;
}

char to_char(Cell c) {
  switch (c) {
    case Cell::Free: return '.';
    case Cell::Obstacle: return '#';
    case Cell::Unknown: return '?';
  }
  return '?';
}

}  // namespace mapex
