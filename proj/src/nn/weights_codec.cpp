#include "mapex/nn/weights_codec.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

namespace mapex::nn {
namespace {

constexpr std::uint8_t kMagic[4] = {'M', 'P', 'W', '1'};
constexpr std::uint8_t kFlagBias = 0x01;
constexpr std::uint8_t kFlagStacksInput = 0x02;
constexpr std::uint8_t kFlagAddsSkip = 0x04;
constexpr std::size_t kLayerHeaderBytes = 9;

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks for very large models.
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - pos, 1u << 30));
    crc = crc32(crc, bytes.data() + pos, chunk);
    pos += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

class Writer {
public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v & 0xFF));
    u8(static_cast<std::uint8_t>(v >> 8));
  }
  void u32(std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) u8(static_cast<std::uint8_t>(v >> shift));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  std::vector<std::uint8_t>& bytes() { return out_; }

private:
  std::vector<std::uint8_t> out_;
};

class Reader {
public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    const auto v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  void need(std::size_t n) const {
    if (remaining() < n) throw CodecError("weight file truncated at byte " + std::to_string(pos_));
  }

private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

template <typename T>
T narrow(int v, const char* what) {
  if (v < 0 || static_cast<unsigned long>(v) > static_cast<unsigned long>(std::numeric_limits<T>::max())) {
    throw CodecError(std::string(what) + " does not fit the MPW1 header field");
  }
  return static_cast<T>(v);
}

}  // namespace

std::vector<std::uint8_t> save_weights(const PredictorWeights& weights) {
  validate_architecture(weights);
  Writer w;
  for (std::uint8_t b : kMagic) w.u8(b);
  w.u32(kWeightsFormatVersion);
  w.u32(static_cast<std::uint32_t>(weights.layers.size()));
  w.u32(narrow<std::uint32_t>(weights.input_height, "input height"));
  w.u32(narrow<std::uint32_t>(weights.input_width, "input width"));
  for (const Layer& layer : weights.layers) {
    const LayerSpec& s = layer.spec;
    w.u8(static_cast<std::uint8_t>(s.kind));
    w.u16(narrow<std::uint16_t>(s.in_channels, "in_channels"));
    w.u16(narrow<std::uint16_t>(s.out_channels, "out_channels"));
    w.u8(narrow<std::uint8_t>(s.kernel_h, "kernel height"));
    w.u8(narrow<std::uint8_t>(s.kernel_w, "kernel width"));
    w.u8(narrow<std::uint8_t>(s.stride, "stride"));
    w.u8(static_cast<std::uint8_t>((s.has_bias ? kFlagBias : 0) |
                                   (s.stacks_input ? kFlagStacksInput : 0) |
                                   (s.adds_skip ? kFlagAddsSkip : 0)));
  }
  for (const Layer& layer : weights.layers) {
    for (float p : layer.params) w.f32(p);
  }
  w.u32(crc32_of(w.bytes()));
  return std::move(w.bytes());
}

PredictorWeights load_weights(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw CodecError("not an MPW1 weight file (bad magic)");
  }
  if (bytes.size() < 8) throw CodecError("weight file truncated in header");
  const auto body = bytes.first(bytes.size() - 4);
  Reader r(bytes.subspan(4));

  PredictorWeights weights;
  weights.format_version = r.u32();
  if (weights.format_version != kWeightsFormatVersion) {
    throw CodecError("unsupported MPW1 version " + std::to_string(weights.format_version));
  }
  const std::uint32_t layer_count = r.u32();
  weights.input_height = static_cast<int>(r.u32());
  weights.input_width = static_cast<int>(r.u32());
  r.need(static_cast<std::size_t>(layer_count) * kLayerHeaderBytes);

  weights.layers.resize(layer_count);
  for (Layer& layer : weights.layers) {
    LayerSpec& s = layer.spec;
    const std::uint8_t kind = r.u8();
    if (kind > static_cast<std::uint8_t>(LayerKind::OutputHead)) {
      throw CodecError("unknown layer kind " + std::to_string(kind));
    }
    s.kind = static_cast<LayerKind>(kind);
    s.in_channels = r.u16();
    s.out_channels = r.u16();
    s.kernel_h = r.u8();
    s.kernel_w = r.u8();
    s.stride = r.u8();
    const std::uint8_t flags = r.u8();
    if ((flags & ~(kFlagBias | kFlagStacksInput | kFlagAddsSkip)) != 0) {
      throw CodecError("unknown layer flags " + std::to_string(flags));
    }
    s.has_bias = (flags & kFlagBias) != 0;
    s.stacks_input = (flags & kFlagStacksInput) != 0;
    s.adds_skip = (flags & kFlagAddsSkip) != 0;
  }
  for (Layer& layer : weights.layers) {
    const std::size_t n = layer.spec.parameter_count();
    r.need(n * 4 + 4);
    layer.params.resize(n);
    for (float& p : layer.params) p = r.f32();
  }
  const std::size_t crc_at = 4 + r.position();
  const std::uint32_t stored = r.u32();
  if (r.remaining() != 0) throw CodecError("trailing bytes after MPW1 checksum");
  if (crc_at != body.size()) throw CodecError("weight file layout inconsistent");
  if (stored != crc32_of(body)) throw CodecError("MPW1 checksum mismatch");

  try {
    validate_architecture(weights);
  } catch (const ShapeError& e) {
    throw CodecError(std::string("invalid layer table: ") + e.what());
  }
  return weights;
}

PredictorWeights read_weights_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CodecError("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return load_weights(bytes);
}

void write_weights_file(const std::filesystem::path& path, const PredictorWeights& weights) {
  const auto bytes = save_weights(weights);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CodecError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CodecError("write failed for " + path.string());
}

}  // namespace mapex::nn
