#pragma once

#include <cstdint>

#include "mapex/grid.hpp"

namespace mapex {

// Obstacle is the positive class. Predicted Unknown cells count as negatives.
struct F1Score {
  std::int64_t true_positives = 0;
  std::int64_t false_positives = 0;
  std::int64_t false_negatives = 0;
  double precision = 0.0;  // 0 when nothing was classified Obstacle
  double recall = 0.0;     // 0 when the truth has no Obstacle
  double f1 = 0.0;         // 2TP / (2TP + FN + FP), 0 when that denominator is 0
};

// Throws ShapeError on a size mismatch.
F1Score f1_score(const OccupancyGrid& predicted, const OccupancyGrid& truth);

}  // namespace mapex
