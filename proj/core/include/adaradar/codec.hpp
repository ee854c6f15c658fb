#ifndef ADARADAR_CODEC_HPP
#define ADARADAR_CODEC_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "adaradar/dct.hpp"
#include "adaradar/tensor.hpp"

namespace adaradar {

// Coefficient grid after magnitude pruning: zeros at pruned positions plus the
// per-(channel, block) kept count and threshold (the k-th largest magnitude).
struct PrunedGrid {
  BlockGrid coeffs;
  std::vector<int> kept_count;    // per (channel, block)
  std::vector<float> threshold;   // kappa per (channel, block)
};

// Keeps the k = floor(M^2 / ratio) largest-magnitude coefficients per block,
// ties at the threshold broken toward the lower flat index. ratio must lie in
// [1, M^2].
PrunedGrid prune(const BlockGrid& coeffs, double ratio);

// One quantized block: scale = peak / S, signed codes for the kept indices in
// ascending index order. An all-zero block has scale 0 and no entries.
struct QuantizedBlock {
  float scale = 0.0f;
  std::vector<std::uint16_t> indices;
  std::vector<std::int32_t> codes;
};

struct QuantizedGrid {
  int channels = 0;
  int blocks = 0;
  int block_len = 0;
  int block_side = 0;
  int tensor_height = 0;
  int tensor_width = 0;
  int bit_width = 0;  // s
  std::vector<QuantizedBlock> records;  // channel-major, block-major

  int max_code() const { return (1 << (bit_width - 1)) - 1; }  // S
};

// Scaled uniform quantization with per-block peak scale; codes are
// round-half-to-even of value/scale, clamped to [-S, S]. bit_width in [2, 16].
QuantizedGrid quantize(const PrunedGrid& pruned, int bit_width);

// value = code * scale; kept counts and thresholds are rebuilt from the codes.
PrunedGrid dequantize(const QuantizedGrid& q);

struct FrameHeader {
  int block_side = 0;    // M
  int bit_width = 0;     // s
  int channels = 0;
  int height = 0;
  int width = 0;
  float requested_ratio = 1.0f;
  std::uint64_t frame_id = 0;
};

struct FrameRecord {
  float scale = 0.0f;
  std::vector<std::uint16_t> indices;  // strictly ascending, < M^2
  std::vector<std::int32_t> codes;     // same length as indices
};

// Complete compressed frame: DCT + prune + quantize output for every
// (channel, block), plus the header needed to reverse the pipeline.
struct EncodedFrame {
  FrameHeader header;
  std::vector<FrameRecord> records;

  int blocks_per_channel() const {
    return (header.height / header.block_side) * (header.width / header.block_side);
  }
  std::uint64_t total_kept() const;
  // Paper-style payload accounting: 32 bits per scale + s bits per kept code.
  std::uint64_t nominal_bits() const;
  // Actual stream cost: header + scales + presence bitmaps + padded codes.
  std::uint64_t wire_bits() const;

  bool operator==(const EncodedFrame&) const = default;
};

inline bool operator==(const FrameHeader& a, const FrameHeader& b) {
  return a.block_side == b.block_side && a.bit_width == b.bit_width &&
         a.channels == b.channels && a.height == b.height && a.width == b.width &&
         a.requested_ratio == b.requested_ratio && a.frame_id == b.frame_id;
}
inline bool operator==(const FrameRecord& a, const FrameRecord& b) {
  return a.scale == b.scale && a.indices == b.indices && a.codes == b.codes;
}

// blockize -> DCT -> prune -> quantize. Deterministic for identical input.
EncodedFrame encode_frame(const RadarTensor& x, double ratio, int bit_width,
                          int block_side, std::uint64_t frame_id = 0);

// dequantize -> inverse DCT -> merge; output shape comes from the header.
RadarTensor decode_frame(const EncodedFrame& frame);

// Drops coefficients from an already-encoded frame down to the new (larger)
// ratio, keeping the largest |code| per block with the usual tie rule. Scale
// factors are untouched; this is the cheap perturbation path the rate
// controller uses.
EncodedFrame reprune(const EncodedFrame& frame, double new_ratio);

struct BitRate {
  double value_bpp = 0.0;     // s / r_effective, the published BR convention
  double nominal_bpp = 0.0;   // value_bpp + 32 / M^2 scale overhead
  double wire_bpp = 0.0;      // full stream cost per pixel
  double compression_ratio = 0.0;  // 32 / value_bpp
  double effective_ratio = 0.0;    // coefficient slots / kept coefficients
};

BitRate bit_rate(const EncodedFrame& frame);

// ARF bitstream. Layout (all integers little-endian): magic "ARF1", u16
// version, u16 M, u8 s, u16 channels, u32 H, u32 W, f32 requested ratio,
// u64 frame id; then per (channel, block): f32 scale, M^2-bit kept-index
// bitmap (MSB-first, padded to a byte), codes packed s bits each MSB-first in
// ascending index order, padded to a byte.
std::vector<std::uint8_t> serialize_frame(const EncodedFrame& frame);
EncodedFrame deserialize_frame(std::span<const std::uint8_t> bytes);

EncodedFrame read_arf(const std::filesystem::path& path);
void write_arf(const EncodedFrame& frame, const std::filesystem::path& path);

}  // namespace adaradar

#endif  // ADARADAR_CODEC_HPP
