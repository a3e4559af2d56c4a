#pragma once

#include <cstddef>
#include <vector>

#include "mapex/errors.hpp"

namespace mapex::nn {

// Dense float tensor in (channel, row, col) order.
class Tensor {
public:
  Tensor() = default;
  Tensor(int channels, int height, int width, float fill = 0.0f)
      : channels_(channels), height_(height), width_(width) {
    if (channels < 0 || height < 0 || width < 0) throw ShapeError("negative tensor dimension");
    data_.assign(static_cast<std::size_t>(channels) * static_cast<std::size_t>(height) *
                     static_cast<std::size_t>(width),
                 fill);
  }

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t plane() const {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }

  float& at(int c, int r, int w) { return data_[offset(c, r, w)]; }
  float at(int c, int r, int w) const { return data_[offset(c, r, w)]; }

  float* channel(int c) { return data_.data() + static_cast<std::size_t>(c) * plane(); }
  const float* channel(int c) const { return data_.data() + static_cast<std::size_t>(c) * plane(); }

  std::vector<float>& data() { return data_; }
  const std::vector<float>& data() const { return data_; }

  friend bool operator==(const Tensor&, const Tensor&) = default;

private:
  std::size_t offset(int c, int r, int w) const {
    return (static_cast<std::size_t>(c) * static_cast<std::size_t>(height_) +
            static_cast<std::size_t>(r)) *
               static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(w);
  }

  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<float> data_;
};

}  // namespace mapex::nn
