#ifndef ADARADAR_BASELINES_HPP
#define ADARADAR_BASELINES_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "adaradar/tensor.hpp"

namespace adaradar {

// Spatial top-K compression: per M x M block, keep the K largest-magnitude
// samples as raw 32-bit values (no quantization).
struct IndexValueFrame {
  int block_side = 0;
  int keep_count = 0;  // K
  int channels = 0;
  int height = 0;
  int width = 0;

  struct Record {
    std::vector<std::uint16_t> indices;  // ascending, < M^2
    std::vector<float> values;
  };
  std::vector<Record> records;  // channel-major, block-major

  int blocks_per_channel() const {
    return (height / block_side) * (width / block_side);
  }
  // Paper convention: 32 bits per kept value, indices not counted.
  double value_bpp() const {
    return 32.0 * keep_count / (static_cast<double>(block_side) * block_side);
  }
};

IndexValueFrame iv_encode(const RadarTensor& x, int block_side, int keep_count);
RadarTensor iv_decode(const IndexValueFrame& frame);

// Published bit-rate accounting for this baseline: 32-bit values only, so the
// bpp at prune ratio r is 32 / r.
double iv_value_bpp_for_ratio(double ratio);

// AIV container: magic "AIV1", u16 M, u16 K, u16 channels, u32 H, u32 W, then
// per record K u16 indices followed by K f32 values, little-endian.
std::vector<std::uint8_t> serialize_iv(const IndexValueFrame& frame);
IndexValueFrame deserialize_iv(std::span<const std::uint8_t> bytes);
IndexValueFrame read_aiv(const std::filesystem::path& path);
void write_aiv(const IndexValueFrame& frame, const std::filesystem::path& path);

// Cell-averaging CFAR over a power map: a cell fires when its power exceeds
// threshold times the mean of the square training ring between the guard and
// window extents (ring clipped at the borders).
struct CfarConfig {
  int window = 9;  // training half-width per side
  int guard = 3;   // guard half-width per side
  double threshold = 3.1622776601683795;  // 10^0.5, linear SNR

  void validate() const;
};

// Returns an H*W row-major 0/1 mask. Throws InvalidArgument when the window
// geometry exceeds the map.
std::vector<std::uint8_t> cfar_detect(std::span<const double> power, int height,
                                      int width, const CfarConfig& cfg);

// Keeps every channel sample at CFAR-flagged cells of the channel-summed
// power map.
struct CfarFrame {
  int channels = 0;
  int height = 0;
  int width = 0;
  CfarConfig config;
  std::vector<std::uint8_t> mask;  // H*W, row-major
  std::vector<float> values;       // channel-major, flagged cells row-major

  std::size_t flagged() const;
  double value_bpp() const;  // 32 * flagged fraction
};

CfarFrame cfar_encode(const RadarTensor& x, const CfarConfig& cfg);
RadarTensor cfar_decode(const CfarFrame& frame);

// ACF container: magic "ACF1", u16 channels, u32 H, u32 W, u16 window,
// u16 guard, f64 threshold, bit-packed mask (MSB-first, padded to a byte),
// then the kept f32 values.
std::vector<std::uint8_t> serialize_cfar(const CfarFrame& frame);
CfarFrame deserialize_cfar(std::span<const std::uint8_t> bytes);
CfarFrame read_acf(const std::filesystem::path& path);
void write_acf(const CfarFrame& frame, const std::filesystem::path& path);

}  // namespace adaradar

#endif  // ADARADAR_BASELINES_HPP
