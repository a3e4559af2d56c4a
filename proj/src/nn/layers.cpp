#include "mapex/nn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mapex::nn {
namespace {

void check_params(const Layer& layer) {
  if (layer.params.size() != layer.spec.parameter_count()) {
    throw ShapeError(std::string(to_string(layer.spec.kind)) + " layer expects " +
                     std::to_string(layer.spec.parameter_count()) + " parameters, got " +
                     std::to_string(layer.params.size()));
  }
  if (layer.spec.stride < 1) throw ShapeError("stride must be positive");
  if (layer.spec.kernel_h < 1 || layer.spec.kernel_w < 1) throw ShapeError("empty kernel");
}

void check_input(const Tensor& input, const Layer& layer) {
  if (input.channels() != layer.spec.in_channels) {
    throw ShapeError(std::string(to_string(layer.spec.kind)) + " layer expects " +
                     std::to_string(layer.spec.in_channels) + " input channels, got " +
                     std::to_string(input.channels()));
  }
}

int ceil_div(int a, int b) { return (a + b - 1) / b; }

}  // namespace

const char* to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::InputEmbed: return "input_embed";
    case LayerKind::Conv: return "conv";
    case LayerKind::TransposedConv: return "transposed_conv";
    case LayerKind::OutputHead: return "output_head";
  }
  return "unknown";
}

Tensor conv2d(const Tensor& input, const Layer& layer) {
  check_params(layer);
  check_input(input, layer);
  const LayerSpec& s = layer.spec;
  const int pad_h = s.kernel_h / 2;
  const int pad_w = s.kernel_w / 2;
  const int in_h = input.height();
  const int in_w = input.width();
  const int out_h = ceil_div(in_h, s.stride);
  const int out_w = ceil_div(in_w, s.stride);

  Tensor out(s.out_channels, out_h, out_w);
  const float* kernel = layer.params.data();
  const float* bias = s.has_bias ? kernel + s.kernel_size() : nullptr;

  for (int oc = 0; oc < s.out_channels; ++oc) {
    float* dst = out.channel(oc);
    if (bias != nullptr) std::fill(dst, dst + out.plane(), bias[oc]);
    for (int ic = 0; ic < s.in_channels; ++ic) {
      const float* src = input.channel(ic);
      for (int ky = 0; ky < s.kernel_h; ++ky) {
        for (int kx = 0; kx < s.kernel_w; ++kx) {
          const float w =
              kernel[((static_cast<std::size_t>(oc) * s.in_channels + ic) * s.kernel_h + ky) *
                         s.kernel_w +
                     kx];
          if (w == 0.0f) continue;
          // Output columns whose input column x*stride + kx - pad_w is in range.
          const int x_lo = std::max(0, ceil_div(pad_w - kx, s.stride));
          const int x_hi = std::min(out_w, ceil_div(in_w + pad_w - kx, s.stride));
          for (int y = 0; y < out_h; ++y) {
            const int iy = y * s.stride + ky - pad_h;
            if (iy < 0 || iy >= in_h) continue;
            const float* row = src + static_cast<std::size_t>(iy) * in_w;
            float* out_row = dst + static_cast<std::size_t>(y) * out_w;
            for (int x = x_lo; x < x_hi; ++x) {
              out_row[x] += w * row[x * s.stride + kx - pad_w];
            }
          }
        }
      }
    }
  }
  return out;
}

Tensor transposed_conv2d(const Tensor& input, const Layer& layer, int out_h, int out_w) {
  check_params(layer);
  check_input(input, layer);
  const LayerSpec& s = layer.spec;
  if (out_h < 1 || out_w < 1 || ceil_div(out_h, s.stride) != input.height() ||
      ceil_div(out_w, s.stride) != input.width()) {
    throw ShapeError("transposed_conv2d: target " + std::to_string(out_h) + "x" +
                     std::to_string(out_w) + " does not reduce to the input size " +
                     std::to_string(input.height()) + "x" + std::to_string(input.width()));
  }
  const int pad_h = s.kernel_h / 2;
  const int pad_w = s.kernel_w / 2;
  const int in_h = input.height();
  const int in_w = input.width();

  Tensor out(s.out_channels, out_h, out_w);
  const float* kernel = layer.params.data();
  const float* bias = s.has_bias ? kernel + s.kernel_size() : nullptr;
  if (bias != nullptr) {
    for (int oc = 0; oc < s.out_channels; ++oc) {
      std::fill(out.channel(oc), out.channel(oc) + out.plane(), bias[oc]);
    }
  }

  for (int ic = 0; ic < s.in_channels; ++ic) {
    const float* src = input.channel(ic);
    for (int oc = 0; oc < s.out_channels; ++oc) {
      float* dst = out.channel(oc);
      for (int ky = 0; ky < s.kernel_h; ++ky) {
        for (int kx = 0; kx < s.kernel_w; ++kx) {
          const float w =
              kernel[((static_cast<std::size_t>(ic) * s.out_channels + oc) * s.kernel_h + ky) *
                         s.kernel_w +
                     kx];
          if (w == 0.0f) continue;
          for (int y = 0; y < in_h; ++y) {
            const int oy = y * s.stride + ky - pad_h;
            if (oy < 0 || oy >= out_h) continue;
            const float* row = src + static_cast<std::size_t>(y) * in_w;
            float* out_row = dst + static_cast<std::size_t>(oy) * out_w;
            for (int x = 0; x < in_w; ++x) {
              const int ox = x * s.stride + kx - pad_w;
              if (ox < 0 || ox >= out_w) continue;
              out_row[ox] += w * row[x];
            }
          }
        }
      }
    }
  }
  return out;
}

void relu_inplace(Tensor& t) {
  for (float& v : t.data()) v = std::max(v, 0.0f);
}

void sigmoid_inplace(Tensor& t) {
  for (float& v : t.data()) v = 1.0f / (1.0f + std::exp(-v));
}

void add_inplace(Tensor& dst, const Tensor& src) {
  if (dst.channels() != src.channels() || dst.height() != src.height() ||
      dst.width() != src.width()) {
    throw ShapeError("add: tensor shapes differ");
  }
  auto& d = dst.data();
  const auto& s = src.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw ShapeError("concat: spatial sizes differ");
  }
  Tensor out(a.channels() + b.channels(), a.height(), a.width());
  std::copy(a.data().begin(), a.data().end(), out.data().begin());
  std::copy(b.data().begin(), b.data().end(),
            out.data().begin() + static_cast<std::ptrdiff_t>(a.data().size()));
  return out;
}

}  // namespace mapex::nn
