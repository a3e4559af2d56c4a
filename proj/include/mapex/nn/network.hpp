#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "mapex/grid.hpp"
#include "mapex/nn/layers.hpp"
#include "mapex/predictor.hpp"

namespace mapex::nn {

inline constexpr int kEncoderLayers = 9;
inline constexpr int kDecoderLayers = 9;
inline constexpr int kDefaultHiddenChannels = 25;

// The full layer table of a map-completion autoencoder:
//   input_embed (3 -> 1, 1x1, no bias)
//   9 encoder convs, stride 2 at encoder layers 3, 6, 9
//   9 decoder layers, transposed stride 2 at decoder layers 1, 4, 7, each
//     adding the activation that entered the mirrored stride-2 encoder layer
//   the last decoder layer also sees the embedded input as one extra channel
//   output_head (1x1 -> 1, sigmoid)
struct PredictorWeights {
  std::uint32_t format_version = 1;
  int input_height = 0;
  int input_width = 0;
  std::vector<Layer> layers;

  friend bool operator==(const PredictorWeights&, const PredictorWeights&) = default;
};

// Throws ShapeError when the layer table is not the architecture above or a
// parameter block has the wrong length.
void validate_architecture(const PredictorWeights& weights);

// Canonical layer table with all parameters zero.
PredictorWeights make_architecture(int input_height, int input_width,
                                   int hidden_channels = kDefaultHiddenChannels);

// Fills every parameter with N(0, stddev^2) draws from a seeded generator.
void randomize(PredictorWeights& weights, std::uint64_t seed, float stddev);

// Pre-sigmoid output, 1 x H x W.
Tensor forward_logits(const PredictorWeights& weights, const OneHotGrid& input);

// Obstacle probabilities. Values are clamped to [1e-7, 1 - 1e-7] so they stay
// strictly inside (0, 1) even when the sigmoid saturates.
ProbabilityGrid forward(const PredictorWeights& weights, const OneHotGrid& input);

class LearnedPredictor final : public Predictor {
public:
  explicit LearnedPredictor(std::shared_ptr<const PredictorWeights> weights);

  ProbabilityGrid predict(const ObservationMap& obs) const override;
  std::string name() const override { return "learned"; }

  const PredictorWeights& weights() const { return *weights_; }

private:
  std::shared_ptr<const PredictorWeights> weights_;
};

}  // namespace mapex::nn
