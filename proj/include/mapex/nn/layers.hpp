#pragma once

#include <cstdint>
#include <vector>

#include "mapex/nn/tensor.hpp"

namespace mapex::nn {

enum class LayerKind : std::uint8_t {
  InputEmbed = 0,      // 1x1 projection of the one-hot input, no bias, no activation
  Conv = 1,            // 3x3, ReLU
  TransposedConv = 2,  // 3x3 stride 2, ReLU (after the optional skip add)
  OutputHead = 3,      // 1x1, sigmoid
};

const char* to_string(LayerKind kind);

struct LayerSpec {
  LayerKind kind = LayerKind::Conv;
  int in_channels = 0;
  int out_channels = 0;
  int kernel_h = 3;
  int kernel_w = 3;
  int stride = 1;
  bool has_bias = true;
  // The embedded input channel is appended to this layer's input.
  bool stacks_input = false;
  // Adds the activation saved by the mirrored stride-2 encoder layer to this
  // (transposed) layer's output, before the activation.
  bool adds_skip = false;

  std::size_t kernel_size() const {
    return static_cast<std::size_t>(out_channels) * static_cast<std::size_t>(in_channels) *
           static_cast<std::size_t>(kernel_h) * static_cast<std::size_t>(kernel_w);
  }
  std::size_t parameter_count() const {
    return kernel_size() + (has_bias ? static_cast<std::size_t>(out_channels) : 0);
  }

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

// Parameter block: kernel then bias. Conv-like kernels are laid out
// [out][in][kh][kw]; transposed kernels [in][out][kh][kw].
struct Layer {
  LayerSpec spec;
  std::vector<float> params;

  friend bool operator==(const Layer&, const Layer&) = default;
};

// Cross-correlation with zero "same" padding of kernel/2 on each side.
// Stride 2 yields ceil(H/2) x ceil(W/2). No activation applied.
Tensor conv2d(const Tensor& input, const Layer& layer);

// Fractionally strided convolution (scatter form) with padding kernel/2,
// cropped or zero-extended to out_h x out_w. No activation applied.
Tensor transposed_conv2d(const Tensor& input, const Layer& layer, int out_h, int out_w);

void relu_inplace(Tensor& t);
void sigmoid_inplace(Tensor& t);
void add_inplace(Tensor& dst, const Tensor& src);
Tensor concat_channels(const Tensor& a, const Tensor& b);

}  // namespace mapex::nn
