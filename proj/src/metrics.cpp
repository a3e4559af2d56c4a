#include "mapex/metrics.hpp"

namespace mapex {

F1Score f1_score(const OccupancyGrid& predicted, const OccupancyGrid& truth) {
  if (!predicted.same_shape(truth)) throw ShapeError("f1_score: grids differ in size");
  F1Score s;
  auto guess = predicted.cells();
  auto real = truth.cells();
  for (std::size_t i = 0; i < real.size(); ++i) {
    const bool said_wall = guess[i] == Cell::Obstacle;
    const bool is_wall = real[i] == Cell::Obstacle;
    if (said_wall && is_wall) ++s.true_positives;
    if (said_wall && !is_wall) ++s.false_positives;
    if (!said_wall && is_wall) ++s.false_negatives;
  }
  const auto tp = static_cast<double>(s.true_positives);
  const auto fp = static_cast<double>(s.false_positives);
  const auto fn = static_cast<double>(s.false_negatives);
  if (tp + fp > 0) s.precision = tp / (tp + fp);
  if (tp + fn > 0) s.recall = tp / (tp + fn);
  if (2 * tp + fn + fp > 0) s.f1 = 2 * tp / (2 * tp + fn + fp);
  return s;
}

}  // namespace mapex
