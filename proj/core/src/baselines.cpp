#include "adaradar/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "adaradar/bitio.hpp"
#include "adaradar/errors.hpp"
#include "adaradar/oracle.hpp"

namespace adaradar {

namespace {

constexpr char kAivMagic[4] = {'A', 'I', 'V', '1'};
constexpr char kAcfMagic[4] = {'A', 'C', 'F', '1'};

std::vector<int> top_k_by_magnitude(std::span<const float> values, int k) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
    const float ma = std::fabs(values[a]);
    const float mb = std::fabs(values[b]);
    if (ma != mb) return ma > mb;
    return a < b;
  });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

IndexValueFrame iv_encode(const RadarTensor& x, int block_side, int keep_count) {
  x.validate();
  const int block_len = block_side * block_side;
  if (keep_count < 1 || keep_count > block_len) {
    throw InvalidArgument("keep count must lie in [1, M^2]");
  }
  const BlockGrid grid = blockize(x, block_side);

  IndexValueFrame frame;
  frame.block_side = block_side;
  frame.keep_count = keep_count;
  frame.channels = x.channels;
  frame.height = x.height;
  frame.width = x.width;
  frame.records.resize(static_cast<std::size_t>(grid.channels) * grid.blocks);

  for (int c = 0; c < grid.channels; ++c) {
    for (int b = 0; b < grid.blocks; ++b) {
      auto src = grid.block(c, b);
      auto& rec = frame.records[static_cast<std::size_t>(c) * grid.blocks + b];
      const auto kept = top_k_by_magnitude(src, keep_count);
      rec.indices.reserve(kept.size());
      rec.values.reserve(kept.size());
      for (int m : kept) {
        rec.indices.push_back(static_cast<std::uint16_t>(m));
        rec.values.push_back(src[m]);
      }
    }
  }
  return frame;
}

double iv_value_bpp_for_ratio(double ratio) {
  if (!(ratio >= 1.0)) throw InvalidArgument("prune ratio must be >= 1");
  return 32.0 / ratio;
}

RadarTensor iv_decode(const IndexValueFrame& frame) {
  if (frame.block_side <= 0 || frame.channels <= 0 ||
      frame.height % frame.block_side != 0 || frame.width % frame.block_side != 0) {
    throw FormatError("index-value frame has inconsistent dims");
  }
  BlockGrid grid;
  grid.channels = frame.channels;
  grid.block_side = frame.block_side;
  grid.block_len = frame.block_side * frame.block_side;
  grid.blocks = frame.blocks_per_channel();
  grid.tensor_height = frame.height;
  grid.tensor_width = frame.width;
  grid.data.assign(static_cast<std::size_t>(grid.channels) * grid.blocks * grid.block_len,
                   0.0f);
  if (frame.records.size() != static_cast<std::size_t>(grid.channels) * grid.blocks) {
    throw CorruptPayloadError("index-value record count mismatch");
  }
  for (int c = 0; c < grid.channels; ++c) {
    for (int b = 0; b < grid.blocks; ++b) {
      const auto& rec = frame.records[static_cast<std::size_t>(c) * grid.blocks + b];
      if (rec.indices.size() != rec.values.size()) {
        throw CorruptPayloadError("index-value entry count mismatch");
      }
      auto dst = grid.block(c, b);
      for (std::size_t i = 0; i < rec.indices.size(); ++i) {
        if (rec.indices[i] >= grid.block_len) {
          throw CorruptPayloadError("index-value index out of range");
        }
        dst[rec.indices[i]] = rec.values[i];
      }
    }
  }
  return merge(grid);
}

std::vector<std::uint8_t> serialize_iv(const IndexValueFrame& frame) {
  std::vector<std::uint8_t> out;
  out.insert(out.end(), kAivMagic, kAivMagic + 4);
  put_u16(out, static_cast<std::uint16_t>(frame.block_side));
  put_u16(out, static_cast<std::uint16_t>(frame.keep_count));
  put_u16(out, static_cast<std::uint16_t>(frame.channels));
  put_u32(out, static_cast<std::uint32_t>(frame.height));
  put_u32(out, static_cast<std::uint32_t>(frame.width));
  for (const auto& rec : frame.records) {
    for (std::uint16_t idx : rec.indices) put_u16(out, idx);
    for (float v : rec.values) put_f32(out, v);
  }
  return out;
}

IndexValueFrame deserialize_iv(std::span<const std::uint8_t> bytes) {
  ByteReader reader(bytes);
  char magic[4];
  auto m = reader.bytes(4);
  std::memcpy(magic, m.data(), 4);
  if (std::memcmp(magic, kAivMagic, 4) != 0) throw FormatError("AIV: bad magic");

  IndexValueFrame frame;
  frame.block_side = reader.u16();
  frame.keep_count = reader.u16();
  frame.channels = reader.u16();
  frame.height = static_cast<int>(reader.u32());
  frame.width = static_cast<int>(reader.u32());
  if (frame.block_side <= 0 || frame.channels <= 0 || frame.channels % 2 != 0 ||
      frame.height <= 0 || frame.width <= 0 ||
      frame.height % frame.block_side != 0 || frame.width % frame.block_side != 0 ||
      frame.keep_count < 1 ||
      frame.keep_count > frame.block_side * frame.block_side) {
    throw FormatError("AIV: malformed header");
  }
  const std::size_t records =
      static_cast<std::size_t>(frame.channels) * frame.blocks_per_channel();
  frame.records.resize(records);
  for (auto& rec : frame.records) {
    rec.indices.resize(frame.keep_count);
    rec.values.resize(frame.keep_count);
    for (auto& idx : rec.indices) idx = reader.u16();
    for (auto& v : rec.values) v = reader.f32();
  }
  if (reader.remaining() != 0) throw CorruptPayloadError("AIV: trailing data");
  return frame;
}

IndexValueFrame read_aiv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_iv(bytes);
}

void write_aiv(const IndexValueFrame& frame, const std::filesystem::path& path) {
  const auto bytes = serialize_iv(frame);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("AIV: write failed");
}

void CfarConfig::validate() const {
  if (guard < 0 || window <= guard) throw InvalidArgument("CFAR needs window > guard >= 0");
  if (!(threshold > 0.0)) throw InvalidArgument("CFAR threshold must be > 0");
}

std::vector<std::uint8_t> cfar_detect(std::span<const double> power, int height,
                                      int width, const CfarConfig& cfg) {
  cfg.validate();
  if (power.size() != static_cast<std::size_t>(height) * width) {
    throw DimensionError("power map length does not match dims");
  }
  if (2 * cfg.window + 1 > height || 2 * cfg.window + 1 > width) {
    throw InvalidArgument("CFAR window exceeds map size");
  }

  std::vector<std::uint8_t> mask(power.size(), 0);
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      double ring_sum = 0.0;
      int ring_cells = 0;
      for (int di = -cfg.window; di <= cfg.window; ++di) {
        const int ii = i + di;
        if (ii < 0 || ii >= height) continue;
        for (int dj = -cfg.window; dj <= cfg.window; ++dj) {
          if (std::max(std::abs(di), std::abs(dj)) <= cfg.guard) continue;
          const int jj = j + dj;
          if (jj < 0 || jj >= width) continue;
          ring_sum += power[static_cast<std::size_t>(ii) * width + jj];
          ++ring_cells;
        }
      }
      const double ring_mean = ring_sum / static_cast<double>(ring_cells);
      if (power[static_cast<std::size_t>(i) * width + j] > cfg.threshold * ring_mean) {
        mask[static_cast<std::size_t>(i) * width + j] = 1;
      }
    }
  }
  return mask;
}

std::size_t CfarFrame::flagged() const {
  std::size_t n = 0;
  for (std::uint8_t m : mask) n += m;
  return n;
}

double CfarFrame::value_bpp() const {
  return 32.0 * static_cast<double>(flagged()) /
         (static_cast<double>(height) * width);
}

CfarFrame cfar_encode(const RadarTensor& x, const CfarConfig& cfg) {
  x.validate();
  const std::vector<double> power = power_map(x);

  CfarFrame frame;
  frame.channels = x.channels;
  frame.height = x.height;
  frame.width = x.width;
  frame.config = cfg;
  frame.mask = cfar_detect(power, x.height, x.width, cfg);

  const std::size_t cells = frame.mask.size();
  for (int c = 0; c < x.channels; ++c) {
    for (std::size_t p = 0; p < cells; ++p) {
      if (frame.mask[p]) {
        frame.values.push_back(x.data[static_cast<std::size_t>(c) * cells + p]);
      }
    }
  }
  return frame;
}

RadarTensor cfar_decode(const CfarFrame& frame) {
  if (frame.mask.size() != static_cast<std::size_t>(frame.height) * frame.width) {
    throw CorruptPayloadError("CFAR mask length mismatch");
  }
  const std::size_t flagged = frame.flagged();
  if (frame.values.size() != flagged * static_cast<std::size_t>(frame.channels)) {
    throw CorruptPayloadError("CFAR value count mismatch");
  }
  RadarTensor x = RadarTensor::zeros(frame.channels, frame.height, frame.width);
  std::size_t v = 0;
  const std::size_t cells = frame.mask.size();
  for (int c = 0; c < frame.channels; ++c) {
    for (std::size_t p = 0; p < cells; ++p) {
      if (frame.mask[p]) x.data[static_cast<std::size_t>(c) * cells + p] = frame.values[v++];
    }
  }
  return x;
}

std::vector<std::uint8_t> serialize_cfar(const CfarFrame& frame) {
  std::vector<std::uint8_t> out;
  out.insert(out.end(), kAcfMagic, kAcfMagic + 4);
  put_u16(out, static_cast<std::uint16_t>(frame.channels));
  put_u32(out, static_cast<std::uint32_t>(frame.height));
  put_u32(out, static_cast<std::uint32_t>(frame.width));
  put_u16(out, static_cast<std::uint16_t>(frame.config.window));
  put_u16(out, static_cast<std::uint16_t>(frame.config.guard));
  std::uint64_t thd_bits;
  const double thd = frame.config.threshold;
  std::memcpy(&thd_bits, &thd, sizeof(thd_bits));
  put_u64(out, thd_bits);
  BitWriter writer(out);
  for (std::uint8_t m : frame.mask) writer.put_bit(m);
  writer.align();
  for (float v : frame.values) put_f32(out, v);
  return out;
}

CfarFrame deserialize_cfar(std::span<const std::uint8_t> bytes) {
  ByteReader reader(bytes);
  char magic[4];
  auto m = reader.bytes(4);
  std::memcpy(magic, m.data(), 4);
  if (std::memcmp(magic, kAcfMagic, 4) != 0) throw FormatError("ACF: bad magic");

  CfarFrame frame;
  frame.channels = reader.u16();
  frame.height = static_cast<int>(reader.u32());
  frame.width = static_cast<int>(reader.u32());
  frame.config.window = reader.u16();
  frame.config.guard = reader.u16();
  const std::uint64_t thd_bits = reader.u64();
  std::memcpy(&frame.config.threshold, &thd_bits, sizeof(thd_bits));
  if (frame.channels <= 0 || frame.channels % 2 != 0 || frame.height <= 0 ||
      frame.width <= 0) {
    throw FormatError("ACF: malformed header");
  }
  const std::size_t cells = static_cast<std::size_t>(frame.height) * frame.width;
  BitReader bits(reader.bytes((cells + 7) / 8));
  frame.mask.resize(cells);
  for (std::size_t p = 0; p < cells; ++p) {
    frame.mask[p] = static_cast<std::uint8_t>(bits.get_bit());
  }
  const std::size_t flagged = frame.flagged();
  frame.values.resize(flagged * static_cast<std::size_t>(frame.channels));
  for (float& v : frame.values) v = reader.f32();
  if (reader.remaining() != 0) throw CorruptPayloadError("ACF: trailing data");
  return frame;
}

CfarFrame read_acf(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_cfar(bytes);
}

void write_acf(const CfarFrame& frame, const std::filesystem::path& path) {
  const auto bytes = serialize_cfar(frame);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("ACF: write failed");
}

}  // namespace adaradar
