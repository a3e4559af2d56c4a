#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mapex/errors.hpp"

namespace mapex {

// Storable cell categories. The agent marker is a rendering overlay and is
// never stored in a grid.
enum class Cell : std::uint8_t { Free = 0, Obstacle = 1, Unknown = 2 };

inline constexpr int kCellCategoryCount = 3;

// (row, col) with row 0 at the top. Ordering is row-major.
struct Coord {
  int row = 0;
  int col = 0;

  friend constexpr auto operator<=>(const Coord&, const Coord&) = default;
  friend constexpr Coord operator+(Coord a, Coord b) { return {a.row + b.row, a.col + b.col}; }
};

std::string to_string(Coord c);

// Dense row-major 2D array. Used for categorical maps, probability maps and
// per-cell planner fields alike.
template <typename T>
class Grid {
public:
  Grid() = default;
  Grid(int height, int width, T fill = T{})
      : height_(height), width_(width),
        cells_(static_cast<std::size_t>(checked_area(height, width)), fill) {}
  Grid(int height, int width, std::vector<T> cells)
      : height_(height), width_(width), cells_(std::move(cells)) {
    if (cells_.size() != static_cast<std::size_t>(checked_area(height, width))) {
      throw ShapeError("grid cell count does not match height x width");
    }
  }

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return cells_.size(); }

  bool contains(Coord c) const {
    return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
  }
  std::size_t index(Coord c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.col);
  }
  Coord coord(std::size_t index) const {
    return {static_cast<int>(index / static_cast<std::size_t>(width_)),
            static_cast<int>(index % static_cast<std::size_t>(width_))};
  }

  const T& operator[](Coord c) const { return cells_[index(c)]; }
  T& operator[](Coord c) { return cells_[index(c)]; }
  const T& at(Coord c) const {
    if (!contains(c)) throw PreconditionError("coordinate " + to_string(c) + " out of bounds");
    return cells_[index(c)];
  }

  std::span<const T> cells() const { return cells_; }
  std::span<T> cells() { return cells_; }

  bool same_shape(const auto& other) const {
    return height_ == other.height() && width_ == other.width();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

private:
  static long checked_area(int height, int width) {
    if (height < 0 || width < 0) throw ShapeError("negative grid dimension");
    return static_cast<long>(height) * width;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<T> cells_;
};

using OccupancyGrid = Grid<Cell>;
// Obstacle probability per cell, each value in [0, 1].
using ProbabilityGrid = Grid<double>;

// Three channels in fixed order [free, obstacle, unknown], each height x width.
class OneHotGrid {
public:
  OneHotGrid(int height, int width);

  int height() const { return height_; }
  int width() const { return width_; }

  float at(Cell channel, Coord c) const { return data_[offset(channel, c)]; }
  float& at(Cell channel, Coord c) { return data_[offset(channel, c)]; }

  // Channel-major (C, H, W) layout, directly consumable as a network input.
  std::span<const float> data() const { return data_; }

private:
  std::size_t offset(Cell channel, Coord c) const {
    return (static_cast<std::size_t>(channel) * static_cast<std::size_t>(height_) +
            static_cast<std::size_t>(c.row)) *
               static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.col);
  }

  int height_;
  int width_;
  std::vector<float> data_;
};

OneHotGrid encode_one_hot(const OccupancyGrid& grid);
// Throws PreconditionError if some cell is not exactly one-hot.
OccupancyGrid decode_one_hot(const OneHotGrid& encoded);

std::size_t count_cells(const OccupancyGrid& grid, Cell category);

// Fraction of Obstacle cells. The grid must be fully known.
double fraction_of_walls(const OccupancyGrid& grid);

// Fraction of cells that are not Unknown.
double known_fraction(const OccupancyGrid& grid);

// Ground truth: no Unknown cells and a closed Obstacle boundary ring.
bool is_ground_truth(const OccupancyGrid& grid);

char to_char(Cell c);

}  // namespace mapex
