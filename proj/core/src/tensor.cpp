#include "adaradar/tensor.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "adaradar/errors.hpp"
#include "adaradar/rng.hpp"

namespace adaradar {

namespace {

constexpr char kRdtMagic[8] = {'R', 'D', 'T', '\0', 'v', '1', '\0', '\0'};

// Point response: Gaussian envelope times a scene-wide spatial fringe. The
// fringe mimics the residual phase ramps FFT processing leaves on point
// echoes; it spreads each target over many cells while keeping its spectrum
// confined to a narrow mid-to-high-frequency neighborhood.
constexpr int kResponseSupport = 8;
constexpr double kEnvelopeSigma = 3.8;
constexpr double kFringeRange = 0.62 * M_PI;    // radians per range bin
constexpr double kFringeDoppler = 0.58 * M_PI;  // radians per Doppler bin

double envelope(int di, int dj) {
  return std::exp(-(di * di + dj * dj) / (2.0 * kEnvelopeSigma * kEnvelopeSigma));
}

void check_scene_spec(const SceneSpec& spec) {
  if (spec.channels <= 0 || spec.height <= 0 || spec.width <= 0) {
    throw InvalidArgument("scene dims must be positive");
  }
  for (const Target& t : spec.targets) {
    if (t.range_bin < 0 || t.range_bin >= spec.height || t.doppler_bin < 0 ||
        t.doppler_bin >= spec.width) {
      throw InvalidArgument("target bin outside the map");
    }
    if (!(t.amplitude > 0.0)) throw InvalidArgument("target amplitude must be > 0");
  }
  if (spec.noise_sigma < 0.0) throw InvalidArgument("noise_sigma must be >= 0");
  if (spec.fringe_scale < 0.0) throw InvalidArgument("fringe_scale must be >= 0");
}

void add_target(RadarTensor& x, const Target& t, int complex_channels,
                double fringe_scale) {
  // sqrt(2) * RMS so that cos^2 + sin^2 sums to 2 * amplitude^2 per pair.
  const double scale = std::sqrt(2.0) * t.amplitude;
  const double fringe_range = fringe_scale * kFringeRange;
  const double fringe_doppler = fringe_scale * kFringeDoppler;
  for (int c = 0; c < complex_channels; ++c) {
    const double channel_phase = t.channel_phase_slope * c;
    for (int di = -kResponseSupport; di <= kResponseSupport; ++di) {
      const int i = t.range_bin + di;
      if (i < 0 || i >= x.height) continue;
      for (int dj = -kResponseSupport; dj <= kResponseSupport; ++dj) {
        const int j = t.doppler_bin + dj;
        if (j < 0 || j >= x.width) continue;
        const double k = envelope(di, dj);
        const double theta = fringe_range * di + fringe_doppler * dj + channel_phase;
        x.at(2 * c, i, j) += static_cast<float>(scale * k * std::cos(theta));
        x.at(2 * c + 1, i, j) += static_cast<float>(scale * k * std::sin(theta));
      }
    }
  }
}

// Reflects a coordinate into [0, limit).
int reflect(double pos, int limit) {
  const double period = 2.0 * (limit - 1);
  double p = std::fmod(pos, period);
  if (p < 0) p += period;
  if (p > limit - 1) p = period - p;
  return static_cast<int>(std::lround(p));
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (in.gcount() != 4) throw CorruptPayloadError("RDT: truncated header length");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

RadarTensor RadarTensor::zeros(int channels, int height, int width) {
  RadarTensor x;
  x.channels = channels;
  x.height = height;
  x.width = width;
  x.data.assign(static_cast<std::size_t>(channels) * height * width, 0.0f);
  return x;
}

void RadarTensor::validate() const {
  if (channels <= 0 || height <= 0 || width <= 0) {
    throw DimensionError("tensor dims must be positive");
  }
  if (channels % 2 != 0) {
    throw InvalidArgument("channel count must be even (real/imag pairs)");
  }
  if (data.size() != static_cast<std::size_t>(channels) * height * width) {
    throw DimensionError("tensor data length does not match dims");
  }
  for (float v : data) {
    if (!std::isfinite(v)) throw InvalidArgument("tensor contains non-finite sample");
  }
}

BlockGrid blockize(const RadarTensor& x, int block_side) {
  if (block_side <= 0) throw InvalidArgument("block side must be positive");
  if (x.height % block_side != 0 || x.width % block_side != 0) {
    std::ostringstream msg;
    msg << "block side " << block_side << " does not divide tensor " << x.height
        << "x" << x.width;
    throw DimensionError(msg.str());
  }
  BlockGrid g;
  g.channels = x.channels;
  g.block_side = block_side;
  g.block_len = block_side * block_side;
  g.blocks = (x.height / block_side) * (x.width / block_side);
  g.tensor_height = x.height;
  g.tensor_width = x.width;
  g.data.resize(static_cast<std::size_t>(g.channels) * g.blocks * g.block_len);

  const int tiles_per_row = x.width / block_side;
  for (int c = 0; c < g.channels; ++c) {
    for (int b = 0; b < g.blocks; ++b) {
      const int tile_i = (b / tiles_per_row) * block_side;
      const int tile_j = (b % tiles_per_row) * block_side;
      auto dst = g.block(c, b);
      for (int i = 0; i < block_side; ++i) {
        for (int j = 0; j < block_side; ++j) {
          dst[i * block_side + j] = x.at(c, tile_i + i, tile_j + j);
        }
      }
    }
  }
  return g;
}

RadarTensor merge(const BlockGrid& grid) {
  if (grid.block_len != grid.block_side * grid.block_side ||
      grid.tensor_height % grid.block_side != 0 ||
      grid.tensor_width % grid.block_side != 0 ||
      grid.blocks != (grid.tensor_height / grid.block_side) *
                         (grid.tensor_width / grid.block_side) ||
      grid.data.size() != static_cast<std::size_t>(grid.channels) * grid.blocks *
                              grid.block_len) {
    throw DimensionError("malformed block grid");
  }
  RadarTensor x = RadarTensor::zeros(grid.channels, grid.tensor_height, grid.tensor_width);
  const int tiles_per_row = grid.tiles_per_row();
  const int m = grid.block_side;
  for (int c = 0; c < grid.channels; ++c) {
    for (int b = 0; b < grid.blocks; ++b) {
      const int tile_i = (b / tiles_per_row) * m;
      const int tile_j = (b % tiles_per_row) * m;
      auto src = grid.block(c, b);
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          x.at(c, tile_i + i, tile_j + j) = src[i * m + j];
        }
      }
    }
  }
  return x;
}

Scene generate_scene(const SceneSpec& spec) {
  check_scene_spec(spec);
  Scene scene;
  scene.tensor = RadarTensor::zeros(2 * spec.channels, spec.height, spec.width);
  scene.truth = spec.targets;
  for (const Target& t : spec.targets) {
    add_target(scene.tensor, t, spec.channels, spec.fringe_scale);
  }
  if (spec.noise_sigma > 0.0) {
    Rng rng(spec.seed);
    for (float& v : scene.tensor.data) {
      v += static_cast<float>(spec.noise_sigma * rng.normal());
    }
  }
  return scene;
}

std::vector<Scene> generate_sequence(const SequenceSpec& spec) {
  if (spec.frames <= 0) throw InvalidArgument("sequence needs at least one frame");
  check_scene_spec(spec.scene);
  std::vector<Scene> frames;
  frames.reserve(spec.frames);
  for (int t = 0; t < spec.frames; ++t) {
    SceneSpec frame_spec = spec.scene;
    frame_spec.seed = spec.scene.seed * 1000003ull + static_cast<std::uint64_t>(t);
    for (std::size_t k = 0; k < frame_spec.targets.size(); ++k) {
      Target& tgt = frame_spec.targets[k];
      const double dir = (k % 2 == 0) ? 1.0 : -1.0;
      tgt.range_bin = reflect(tgt.range_bin + dir * spec.range_rate * t, spec.scene.height);
      tgt.doppler_bin =
          reflect(tgt.doppler_bin + dir * spec.doppler_rate * (t + 2.0 * double(k)),
                  spec.scene.width);
      const double wobble =
          1.0 + spec.amplitude_wobble *
                    std::sin(2.0 * M_PI * (t / 60.0 + 0.17 * double(k + 1)));
      tgt.amplitude *= wobble;
    }
    frames.push_back(generate_scene(frame_spec));
  }
  return frames;
}

void write_rdt(const RadarTensor& x, std::ostream& out) {
  x.validate();
  nlohmann::json header = {{"channels", x.channels},
                           {"height", x.height},
                           {"width", x.width},
                           {"dtype", "f32le"}};
  const std::string header_text = header.dump();
  out.write(kRdtMagic, sizeof(kRdtMagic));
  put_u32(out, static_cast<std::uint32_t>(header_text.size()));
  out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
  out.write(reinterpret_cast<const char*>(x.data.data()),
            static_cast<std::streamsize>(x.data.size() * sizeof(float)));
  if (!out) throw Error("RDT: write failed");
}

RadarTensor read_rdt(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (in.gcount() != sizeof(magic) || std::memcmp(magic, kRdtMagic, sizeof(magic)) != 0) {
    throw FormatError("RDT: bad magic");
  }
  const std::uint32_t header_len = get_u32(in);
  std::string header_text(header_len, '\0');
  in.read(header_text.data(), header_len);
  if (in.gcount() != static_cast<std::streamsize>(header_len)) {
    throw CorruptPayloadError("RDT: truncated header");
  }
  nlohmann::json header = nlohmann::json::parse(header_text, nullptr, false);
  if (header.is_discarded()) throw FormatError("RDT: header is not valid JSON");
  if (!header.contains("channels") || !header.contains("height") ||
      !header.contains("width") || header.value("dtype", "") != "f32le") {
    throw FormatError("RDT: header missing fields or unsupported dtype");
  }
  RadarTensor x;
  x.channels = header["channels"].get<int>();
  x.height = header["height"].get<int>();
  x.width = header["width"].get<int>();
  if (x.channels <= 0 || x.channels % 2 != 0 || x.height <= 0 || x.width <= 0) {
    throw DimensionError("RDT: invalid dims in header");
  }
  const std::size_t count = static_cast<std::size_t>(x.channels) * x.height * x.width;
  x.data.resize(count);
  in.read(reinterpret_cast<char*>(x.data.data()),
          static_cast<std::streamsize>(count * sizeof(float)));
  if (in.gcount() != static_cast<std::streamsize>(count * sizeof(float))) {
    throw CorruptPayloadError("RDT: truncated payload");
  }
  return x;
}

RadarTensor read_rdt(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  RadarTensor x = read_rdt(in);
  if (in.peek() != std::istream::traits_type::eof()) {
    throw CorruptPayloadError("RDT: trailing data after payload");
  }
  return x;
}

void write_rdt(const RadarTensor& x, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_rdt(x, out);
}

std::vector<RadarTensor> read_rdt_sequence(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<RadarTensor> frames;
  while (in.peek() != std::istream::traits_type::eof()) {
    frames.push_back(read_rdt(in));
  }
  if (frames.empty()) throw FormatError("RDT sequence: no frames");
  return frames;
}

void write_rdt_sequence(std::span<const RadarTensor> frames,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  for (const RadarTensor& x : frames) write_rdt(x, out);
}

}  // namespace adaradar
