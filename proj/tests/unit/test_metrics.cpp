#include <doctest.h>

#include <random>

#include "mapex/metrics.hpp"
#include "oracles.hpp"

using namespace mapex;

TEST_CASE("perfect prediction scores one") {
  std::mt19937_64 rng(4);
  const OccupancyGrid truth = oracle::random_map(rng, 6, 6, 0.4, 0.0);
  const F1Score s = f1_score(truth, truth);
  CHECK(s.precision == 1.0);
  CHECK(s.recall == 1.0);
  CHECK(s.f1 == 1.0);
}

TEST_CASE("three hits, one false alarm and two misses") {
  // Truth walls at cells 0..4; prediction marks 0..2 and 5.
  OccupancyGrid truth(1, 8, Cell::Free);
  OccupancyGrid pred(1, 8, Cell::Free);
  for (int c = 0; c < 5; ++c) truth[{0, c}] = Cell::Obstacle;
  for (int c : {0, 1, 2, 5}) pred[{0, c}] = Cell::Obstacle;
  pred[{0, 3}] = Cell::Unknown;
  const F1Score s = f1_score(pred, truth);
  CHECK(s.true_positives == 3);
  CHECK(s.false_positives == 1);
  CHECK(s.false_negatives == 2);
  CHECK(s.precision == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(s.recall == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(s.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("both forms of F1 agree on random grids") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 500; ++i) {
    const OccupancyGrid truth = oracle::random_map(rng, 8, 8, 0.3, 0.0);
    const OccupancyGrid pred = oracle::random_map(rng, 8, 8, 0.3, 0.3);
    const F1Score s = f1_score(pred, truth);
    if (s.precision + s.recall > 0.0) {
      CHECK(std::abs(s.f1 - 2.0 * s.precision * s.recall / (s.precision + s.recall)) <= 1e-12);
    }
  }
}

TEST_CASE("degenerate denominators give zero") {
  const OccupancyGrid free_only(3, 3, Cell::Free);
  const F1Score s = f1_score(OccupancyGrid(3, 3, Cell::Unknown), free_only);
  CHECK(s.f1 == 0.0);
  CHECK(s.precision == 0.0);
  CHECK(s.recall == 0.0);
  CHECK_THROWS_AS(f1_score(free_only, OccupancyGrid(3, 4)), ShapeError);
}
