#pragma once

#include <memory>
#include <string>

#include "mapex/grid.hpp"
#include "mapex/sensing.hpp"

namespace mapex {

// Per-class confidence levels. A probability p classifies as
//   Free      if p <= (1 - delta_free) / 2
//   Obstacle  if p >= (1 + delta_obstacle) / 2
//   Unknown   otherwise.
// When both bands meet (delta_free = delta_obstacle = 0, p = 0.5) Obstacle wins.
struct ThresholdConfig {
  double delta_free = 0.93;
  double delta_obstacle = 0.95;

  double free_cut() const { return (1.0 - delta_free) / 2.0; }
  double obstacle_cut() const { return (1.0 + delta_obstacle) / 2.0; }

  // Throws ConfigError unless both deltas lie in [0, 1].
  void validate() const;

  static ThresholdConfig defaults() { return {0.93, 0.95}; }
  static ThresholdConfig preset_85() { return {0.85, 0.85}; }
};

Cell classify(double p, const ThresholdConfig& cfg);
OccupancyGrid threshold(const ProbabilityGrid& p, const ThresholdConfig& cfg);

// Overlay: observed cells win, Unknown observations fall back to the prediction.
OccupancyGrid synthesize(const ObservationMap& obs, const OccupancyGrid& predicted);

ProbabilityGrid null_predict(const ObservationMap& obs);
ProbabilityGrid oracle_predict(const ObservationMap& obs, const OccupancyGrid& truth);

// Maps a partial observation to a full obstacle-probability map of equal size.
// Implementations must be safe for concurrent predict() calls.
class Predictor {
public:
  virtual ~Predictor() = default;
  virtual ProbabilityGrid predict(const ObservationMap& obs) const = 0;
  virtual std::string name() const = 0;
};

// Echoes observations: Free 0, Obstacle 1, Unknown 0.5. Thresholding its output
// with any positive delta reproduces the observation map.
class NullPredictor final : public Predictor {
public:
  ProbabilityGrid predict(const ObservationMap& obs) const override { return null_predict(obs); }
  std::string name() const override { return "null"; }
};

// Knows the ground truth. Upper bound for planner integration.
class OraclePredictor final : public Predictor {
public:
  explicit OraclePredictor(OccupancyGrid truth) : truth_(std::move(truth)) {}
  ProbabilityGrid predict(const ObservationMap& obs) const override {
    return oracle_predict(obs, truth_);
  }
  std::string name() const override { return "oracle"; }

private:
  OccupancyGrid truth_;
};

// threshold(predict(obs)) overlaid with obs: the constructed map.
OccupancyGrid construct_map(const Predictor& predictor, const ObservationMap& obs,
                            const ThresholdConfig& cfg);

}  // namespace mapex
