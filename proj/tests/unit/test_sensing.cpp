#include <doctest.h>

#include <algorithm>
#include <random>

#include "mapex/grid_io.hpp"
#include "mapex/sensing.hpp"
#include "oracles.hpp"

using namespace mapex;

namespace {

OccupancyGrid boxed(int height, int width) {
  OccupancyGrid g(height, width, Cell::Free);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      if (r == 0 || c == 0 || r == height - 1 || c == width - 1) g[{r, c}] = Cell::Obstacle;
    }
  }
  return g;
}

SensorRig east_only(double range = 20.0) { return {1, range, 0.0}; }

// Quarter turn counter-clockwise: east becomes north.
Coord rotate(Coord c, int width) { return {width - 1 - c.col, c.row}; }

OccupancyGrid rotate(const OccupancyGrid& g) {
  OccupancyGrid out(g.width(), g.height());
  for (int r = 0; r < g.height(); ++r) {
    for (int c = 0; c < g.width(); ++c) out[rotate({r, c}, g.width())] = g[{r, c}];
  }
  return out;
}

}  // namespace

TEST_CASE("east beam on an open map reports range-many free cells") {
  const OccupancyGrid g = boxed(45, 45);
  const Coord pose{22, 22};
  const Readings got = sense(g, pose, east_only());
  Readings expected{{pose, Cell::Free}};
  for (int k = 1; k <= 20; ++k) expected.push_back({{22, 22 + k}, Cell::Free});
  CHECK(got == expected);
}

TEST_CASE("east beam stops at the first wall and reports it") {
  OccupancyGrid g = boxed(45, 45);
  g[{22, 27}] = Cell::Obstacle;
  g[{22, 28}] = Cell::Free;
  const Readings got = sense(g, {22, 22}, east_only());
  Readings expected{{{22, 22}, Cell::Free}};
  for (int k = 1; k <= 4; ++k) expected.push_back({{22, 22 + k}, Cell::Free});
  expected.push_back({{22, 27}, Cell::Obstacle});
  CHECK(got == expected);
}

TEST_CASE("a one-cell pocket reveals exactly its eight walls and the pose") {
  OccupancyGrid g(5, 5, Cell::Free);
  for (int r = 1; r <= 3; ++r) {
    for (int c = 1; c <= 3; ++c) g[{r, c}] = Cell::Obstacle;
  }
  g[{2, 2}] = Cell::Free;
  const Readings got = sense(g, {2, 2}, SensorRig{});
  REQUIRE(got.size() == 9);
  for (const Reading& r : got) {
    CHECK(std::abs(r.cell.row - 2) <= 1);
    CHECK(std::abs(r.cell.col - 2) <= 1);
    CHECK(r.category == (r.cell == Coord{2, 2} ? Cell::Free : Cell::Obstacle));
  }
}

TEST_CASE("a diagonal beam through lattice corners touches both side cells") {
  const OccupancyGrid g = boxed(9, 9);
  const Readings got = sense(g, {4, 4}, SensorRig{1, 2.0, 45.0});
  const Readings expected = {{{3, 4}, Cell::Free}, {{3, 5}, Cell::Free},
                             {{4, 4}, Cell::Free}, {{4, 5}, Cell::Free}};
  CHECK(got == expected);
}

TEST_CASE("readings are sound, sorted and inside the range disc") {
  std::mt19937_64 rng(11);
  const SensorRig rig{16, 6.5, 0.0};
  for (int trial = 0; trial < 100; ++trial) {
    OccupancyGrid g = oracle::random_map(rng, 20, 17, 0.2, 0.0);
    const auto pose = oracle::first_free(g);
    if (!pose) continue;
    const Readings got = sense(g, *pose, rig);
    CHECK(std::ranges::is_sorted(got, {}, &Reading::cell));
    CHECK(std::ranges::adjacent_find(got, {}, &Reading::cell) == got.end());
    for (const Reading& r : got) {
      CHECK(r.category == g[r.cell]);
      const double dr = r.cell.row - pose->row;
      const double dc = r.cell.col - pose->col;
      CHECK(dr * dr + dc * dc <= rig.range * rig.range);
    }
  }
}

TEST_CASE("the visible set turns with the map by a quarter turn") {
  std::mt19937_64 rng(5);
  const SensorRig rig{16, 9.0, 0.0};
  for (int trial = 0; trial < 50; ++trial) {
    const OccupancyGrid g = oracle::random_map(rng, 15, 21, 0.15, 0.0);
    const auto pose = oracle::first_free(g);
    if (!pose) continue;
    Readings turned;
    for (const Reading& r : sense(g, *pose, rig)) turned.push_back({rotate(r.cell, g.width()), r.category});
    std::ranges::sort(turned, {}, &Reading::cell);
    CHECK(sense(rotate(g), rotate(*pose, g.width()), rig) == turned);
  }
}

TEST_CASE("unknown cells do not block beams on a planning map") {
  OccupancyGrid g = boxed(9, 15);
  g[{4, 6}] = Cell::Unknown;
  const Readings got = trace_beams(g, {4, 4}, east_only(20.0));
  REQUIRE(got.size() == 11);
  CHECK(got[2] == Reading{{4, 6}, Cell::Unknown});
  CHECK(got.back() == Reading{{4, 14}, Cell::Obstacle});
}

TEST_CASE("sensing preconditions") {
  const OccupancyGrid g = boxed(5, 5);
  CHECK_THROWS_AS(sense(g, {0, 0}, SensorRig{}), PreconditionError);
  CHECK_THROWS_AS(sense(g, {9, 9}, SensorRig{}), PreconditionError);
  OccupancyGrid unknown_pose = g;
  unknown_pose[{2, 2}] = Cell::Unknown;
  CHECK_THROWS_AS(sense(unknown_pose, {2, 2}, SensorRig{}), PreconditionError);
  CHECK_THROWS_AS(sense(g, {2, 2}, SensorRig{0, 5.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(sense(g, {2, 2}, SensorRig{4, -1.0, 0.0}), ConfigError);
}

TEST_CASE("accumulate is a union with the empty map as identity") {
  const OccupancyGrid g = boxed(12, 12);
  const ObservationMap empty = empty_observation(12, 12);
  CHECK(accumulate(empty, {}) == empty);

  const Readings r = sense(g, {5, 5}, SensorRig{});
  const ObservationMap once = accumulate(empty, r);
  for (std::size_t i = 0; i < once.size(); ++i) {
    const Coord c = once.coord(i);
    const bool seen = std::ranges::any_of(r, [&](const Reading& x) { return x.cell == c; });
    CHECK(once[c] == (seen ? g[c] : Cell::Unknown));
  }
  CHECK(accumulate(once, r) == once);

  ObservationMap in_place = empty;
  CHECK(accumulate_into(in_place, r) == r.size());
  CHECK(accumulate_into(in_place, r) == 0);
}

TEST_CASE("contradictory readings are rejected without side effects") {
  ObservationMap obs = empty_observation(3, 3);
  obs[{1, 1}] = Cell::Free;
  const ObservationMap before = obs;
  CHECK_THROWS_AS(accumulate_into(obs, {{{0, 0}, Cell::Free}, {{1, 1}, Cell::Obstacle}}),
                  ConsistencyError);
  CHECK(obs == before);
  CHECK_THROWS_AS(accumulate_into(obs, {{{5, 5}, Cell::Free}}), PreconditionError);
  CHECK_THROWS_AS(accumulate_into(obs, {{{0, 0}, Cell::Unknown}}), PreconditionError);
}
