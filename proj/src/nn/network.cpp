#include "mapex/nn/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mapex::nn {
namespace {

constexpr int kLayerCount = 1 + kEncoderLayers + kDecoderLayers + 1;

bool is_encoder_downsample(int encoder_index) { return encoder_index % 3 == 2; }  // 0-based
bool is_decoder_upsample(int decoder_index) { return decoder_index % 3 == 0; }

LayerSpec expected_spec(int index, int hidden) {
  LayerSpec s;
  if (index == 0) {
    s = {LayerKind::InputEmbed, kCellCategoryCount, 1, 1, 1, 1, false, false, false};
  } else if (index <= kEncoderLayers) {
    const int e = index - 1;
    s = {LayerKind::Conv, e == 0 ? 1 : hidden, hidden, 3, 3,
         is_encoder_downsample(e) ? 2 : 1, true, false, false};
  } else if (index <= kEncoderLayers + kDecoderLayers) {
    const int d = index - 1 - kEncoderLayers;
    const bool up = is_decoder_upsample(d);
    const bool last = d == kDecoderLayers - 1;
    s = {up ? LayerKind::TransposedConv : LayerKind::Conv,
         hidden + (last ? 1 : 0), hidden, 3, 3, up ? 2 : 1, true, last, up};
  } else {
    s = {LayerKind::OutputHead, hidden, 1, 1, 1, 1, true, false, false};
  }
  return s;
}

std::string describe(int index, const LayerSpec& s) {
  return "layer " + std::to_string(index) + " (" + to_string(s.kind) + ", " +
         std::to_string(s.in_channels) + "->" + std::to_string(s.out_channels) + ", " +
         std::to_string(s.kernel_h) + "x" + std::to_string(s.kernel_w) + ", stride " +
         std::to_string(s.stride) + ")";
}

Tensor to_tensor(const OneHotGrid& grid) {
  Tensor t(kCellCategoryCount, grid.height(), grid.width());
  std::ranges::copy(grid.data(), t.data().begin());
  return t;
}

struct SavedActivation {
  Tensor activation;
  int height;
  int width;
};

}  // namespace

void validate_architecture(const PredictorWeights& weights) {
  if (weights.input_height < 1 || weights.input_width < 1) {
    throw ShapeError("declared input size must be positive");
  }
  if (static_cast<int>(weights.layers.size()) != kLayerCount) {
    throw ShapeError("expected " + std::to_string(kLayerCount) + " layers, got " +
                     std::to_string(weights.layers.size()));
  }
  const int hidden = weights.layers[1].spec.out_channels;
  if (hidden < 1) throw ShapeError("hidden width must be positive");
  for (int i = 0; i < kLayerCount; ++i) {
    const Layer& layer = weights.layers[static_cast<std::size_t>(i)];
    if (layer.spec != expected_spec(i, hidden)) {
      throw ShapeError("unexpected " + describe(i, layer.spec) + ", wanted " +
                       describe(i, expected_spec(i, hidden)));
    }
    if (layer.params.size() != layer.spec.parameter_count()) {
      throw ShapeError(describe(i, layer.spec) + " has " + std::to_string(layer.params.size()) +
                       " parameters, wanted " + std::to_string(layer.spec.parameter_count()));
    }
  }
}

PredictorWeights make_architecture(int input_height, int input_width, int hidden_channels) {
  if (hidden_channels < 1) throw ShapeError("hidden width must be positive");
  PredictorWeights w;
  w.input_height = input_height;
  w.input_width = input_width;
  for (int i = 0; i < kLayerCount; ++i) {
    Layer layer;
    layer.spec = expected_spec(i, hidden_channels);
    layer.params.assign(layer.spec.parameter_count(), 0.0f);
    w.layers.push_back(std::move(layer));
  }
  validate_architecture(w);
  return w;
}

void randomize(PredictorWeights& weights, std::uint64_t seed, float stddev) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> dist(0.0f, stddev);
  for (Layer& layer : weights.layers) {
    for (float& p : layer.params) p = dist(rng);
  }
}

Tensor forward_logits(const PredictorWeights& weights, const OneHotGrid& input) {
  validate_architecture(weights);
  if (input.height() != weights.input_height || input.width() != weights.input_width) {
    throw ShapeError("input is " + std::to_string(input.height()) + "x" +
                     std::to_string(input.width()) + ", network declares " +
                     std::to_string(weights.input_height) + "x" +
                     std::to_string(weights.input_width));
  }

  Tensor x = to_tensor(input);
  Tensor embedded;
  std::vector<SavedActivation> skips;
  for (const Layer& layer : weights.layers) {
    const LayerSpec& s = layer.spec;
    if (s.stacks_input) x = concat_channels(x, embedded);
    switch (s.kind) {
      case LayerKind::InputEmbed:
        x = conv2d(x, layer);
        embedded = x;
        break;
      case LayerKind::Conv:
        if (s.stride > 1) skips.push_back({x, x.height(), x.width()});
        x = conv2d(x, layer);
        relu_inplace(x);
        break;
      case LayerKind::TransposedConv: {
        SavedActivation saved = std::move(skips.back());
        skips.pop_back();
        x = transposed_conv2d(x, layer, saved.height, saved.width);
        if (s.adds_skip) add_inplace(x, saved.activation);
        relu_inplace(x);
        break;
      }
      case LayerKind::OutputHead:
        x = conv2d(x, layer);
        break;
    }
  }
  return x;
}

ProbabilityGrid forward(const PredictorWeights& weights, const OneHotGrid& input) {
  const Tensor logits = forward_logits(weights, input);
  constexpr double kEps = 1e-7;
  ProbabilityGrid out(logits.height(), logits.width(), 0.5);
  auto dst = out.cells();
  const auto& src = logits.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double p = 1.0 / (1.0 + std::exp(-static_cast<double>(src[i])));
    dst[i] = std::clamp(p, kEps, 1.0 - kEps);
  }
  return out;
}

LearnedPredictor::LearnedPredictor(std::shared_ptr<const PredictorWeights> weights)
    : weights_(std::move(weights)) {
  if (!weights_) throw PreconditionError("LearnedPredictor needs weights");
  validate_architecture(*weights_);
}

ProbabilityGrid LearnedPredictor::predict(const ObservationMap& obs) const {
  return forward(*weights_, encode_one_hot(obs));
}

}  // namespace mapex::nn
