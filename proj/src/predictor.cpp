#include "mapex/predictor.hpp"

namespace mapex {

void ThresholdConfig::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(delta_free) || !in_unit(delta_obstacle)) {
    throw ConfigError("threshold confidences must lie in [0, 1]");
  }
}

Cell classify(double p, const ThresholdConfig& cfg) {
  if (p >= cfg.obstacle_cut()) return Cell::Obstacle;
  if (p <= cfg.free_cut()) return Cell::Free;
  return Cell::Unknown;
}

OccupancyGrid threshold(const ProbabilityGrid& p, const ThresholdConfig& cfg) {
  cfg.validate();
  OccupancyGrid out(p.height(), p.width(), Cell::Unknown);
  auto src = p.cells();
  auto dst = out.cells();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = classify(src[i], cfg);
  return out;
}

OccupancyGrid synthesize(const ObservationMap& obs, const OccupancyGrid& predicted) {
  if (!obs.same_shape(predicted)) throw ShapeError("synthesize: observation and prediction differ in size");
  OccupancyGrid out = predicted;
  auto seen = obs.cells();
  auto dst = out.cells();
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i] != Cell::Unknown) dst[i] = seen[i];
  }
  return out;
}

ProbabilityGrid null_predict(const ObservationMap& obs) {
  ProbabilityGrid out(obs.height(), obs.width(), 0.5);
  auto seen = obs.cells();
  auto dst = out.cells();
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i] == Cell::Free) dst[i] = 0.0;
    if (seen[i] == Cell::Obstacle) dst[i] = 1.0;
  }
  return out;
}

ProbabilityGrid oracle_predict(const ObservationMap& obs, const OccupancyGrid& truth) {
  if (!obs.same_shape(truth)) throw ShapeError("oracle_predict: observation and truth differ in size");
  ProbabilityGrid out(truth.height(), truth.width(), 0.0);
  auto seen = obs.cells();
  auto real = truth.cells();
  auto dst = out.cells();
  for (std::size_t i = 0; i < real.size(); ++i) {
    if (real[i] == Cell::Unknown) throw PreconditionError("oracle truth contains Unknown cells");
    if (seen[i] != Cell::Unknown && seen[i] != real[i]) {
      throw ConsistencyError("observation contradicts truth at " + to_string(truth.coord(i)));
    }
    dst[i] = real[i] == Cell::Obstacle ? 1.0 : 0.0;
  }
  return out;
}

OccupancyGrid construct_map(const Predictor& predictor, const ObservationMap& obs,
                            const ThresholdConfig& cfg) {
  const ProbabilityGrid p = predictor.predict(obs);
  if (!p.same_shape(obs)) throw ShapeError("predictor " + predictor.name() + " changed the map size");
  return synthesize(obs, threshold(p, cfg));
}

}  // namespace mapex
