#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mapex/nn/network.hpp"

namespace mapex::nn {

// MPW1 weight file, all integers and floats little-endian:
//
//   "MPW1"                        4 bytes
//   version                       u32 (= 1)
//   layer count                   u32
//   input height, input width     u32, u32
//   per layer, 9 bytes:
//     kind u8, in u16, out u16, kernel h u8, kernel w u8, stride u8, flags u8
//     flags: bit0 bias, bit1 stacks embedded input, bit2 adds mirrored skip
//   parameter blocks              f32 each, in layer order, kernel then bias
//   CRC-32 (zlib polynomial)      u32 over every preceding byte
inline constexpr std::uint32_t kWeightsFormatVersion = 1;

std::vector<std::uint8_t> save_weights(const PredictorWeights& weights);

// Throws CodecError on bad magic, unsupported version, truncation, trailing
// bytes, checksum mismatch or an invalid layer table.
PredictorWeights load_weights(std::span<const std::uint8_t> bytes);

PredictorWeights read_weights_file(const std::filesystem::path& path);
void write_weights_file(const std::filesystem::path& path, const PredictorWeights& weights);

}  // namespace mapex::nn
