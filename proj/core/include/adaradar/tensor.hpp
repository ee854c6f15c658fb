#ifndef ADARADAR_TENSOR_HPP
#define ADARADAR_TENSOR_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace adaradar {

// Real-valued radar feature map. A complex C x H x W range-Doppler cube is
// stored as 2C real channels (real/imaginary interleaved pairwise along the
// channel axis), channel-major then row-major, 32-bit floats.
struct RadarTensor {
  int channels = 0;  // 2C, always even
  int height = 0;    // range bins
  int width = 0;     // Doppler bins
  std::vector<float> data;

  static RadarTensor zeros(int channels, int height, int width);

  std::size_t size() const { return data.size(); }

  float& at(int c, int i, int j) {
    return data[(static_cast<std::size_t>(c) * height + i) * width + j];
  }
  float at(int c, int i, int j) const {
    return data[(static_cast<std::size_t>(c) * height + i) * width + j];
  }

  // Throws DimensionError / InvalidArgument when an invariant is broken:
  // data length, even channel count, all samples finite.
  void validate() const;

  bool operator==(const RadarTensor&) const = default;
};

// The tensor reorganized into flattened M*M blocks, one grid entry per
// (channel, block). Blocks walk tiles in row-major order; samples inside a
// block are row-major as well.
struct BlockGrid {
  int channels = 0;
  int blocks = 0;       // B = H*W / M^2 per channel
  int block_len = 0;    // M^2
  int block_side = 0;   // M
  int tensor_height = 0;
  int tensor_width = 0;
  std::vector<float> data;  // (channel, block, m)

  std::span<float> block(int c, int b) {
    return {data.data() + (static_cast<std::size_t>(c) * blocks + b) * block_len,
            static_cast<std::size_t>(block_len)};
  }
  std::span<const float> block(int c, int b) const {
    return {data.data() + (static_cast<std::size_t>(c) * blocks + b) * block_len,
            static_cast<std::size_t>(block_len)};
  }

  int tiles_per_row() const { return tensor_width / block_side; }
};

// Splits x into non-overlapping M x M tiles and flattens each tile row-major.
// Throws DimensionError unless M divides both H and W.
BlockGrid blockize(const RadarTensor& x, int block_side);

// Inverse of blockize; bit-exact round trip.
RadarTensor merge(const BlockGrid& grid);

// One synthetic point target: a windowed point response placed at
// (range_bin, doppler_bin) in every channel with a per-channel phase ramp.
// `amplitude` is the per-channel RMS amplitude of the response peak, so the
// channel-averaged power at the peak equals amplitude^2.
struct Target {
  int range_bin = 0;
  int doppler_bin = 0;
  double amplitude = 1.0;
  double channel_phase_slope = 0.0;  // radians per complex channel
};

struct SceneSpec {
  std::vector<Target> targets;
  double noise_sigma = 0.0;  // per-sample Gaussian standard deviation
  int channels = 2;          // complex channel count C; tensor gets 2C
  int height = 64;
  int width = 64;
  std::uint64_t seed = 0;
  // Scales the response's spatial fringe; 0 gives a baseband (smooth) blob.
  double fringe_scale = 1.0;
};

struct Scene {
  RadarTensor tensor;
  std::vector<Target> truth;
};

// Deterministic for a fixed spec (seed included). Throws InvalidArgument on
// out-of-bounds targets, non-positive amplitude or negative noise.
Scene generate_scene(const SceneSpec& spec);

// Frame sequence: targets drift through the map and their amplitudes wobble
// sinusoidally, giving the rate controller something to track.
struct SequenceSpec {
  SceneSpec scene;
  int frames = 200;
  double range_rate = 0.15;    // bins per frame before reflection
  double doppler_rate = 0.25;  // bins per frame before reflection
  double amplitude_wobble = 0.3;  // relative peak-amplitude modulation
};

std::vector<Scene> generate_sequence(const SequenceSpec& spec);

// RDT container I/O. Layout: 8-byte magic, u32 little-endian JSON header
// length, JSON header, raw f32 little-endian payload.
RadarTensor read_rdt(const std::filesystem::path& path);
void write_rdt(const RadarTensor& x, const std::filesystem::path& path);
RadarTensor read_rdt(std::istream& in);
void write_rdt(const RadarTensor& x, std::ostream& out);

// A .rdtseq file is a plain concatenation of RDT frames.
std::vector<RadarTensor> read_rdt_sequence(const std::filesystem::path& path);
void write_rdt_sequence(std::span<const RadarTensor> frames,
                        const std::filesystem::path& path);

}  // namespace adaradar

#endif  // ADARADAR_TENSOR_HPP
