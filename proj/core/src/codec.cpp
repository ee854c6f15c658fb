#include "adaradar/codec.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "adaradar/bitio.hpp"
#include "adaradar/errors.hpp"

namespace adaradar {

namespace {

constexpr char kArfMagic[4] = {'A', 'R', 'F', '1'};
constexpr std::uint16_t kArfVersion = 1;
constexpr std::size_t kArfHeaderBytes = 31;
constexpr int kScaleBits = 32;  // scale factors stay full 32-bit floats

void check_ratio(double ratio, int block_len) {
  if (!(ratio >= 1.0) || !(ratio <= static_cast<double>(block_len))) {
    std::ostringstream msg;
    msg << "pruning ratio " << ratio << " outside [1, " << block_len << "]";
    throw InvalidArgument(msg.str());
  }
}

void check_bit_width(int bit_width) {
  if (bit_width < 2 || bit_width > 16) {
    throw InvalidArgument("bit width must lie in [2, 16]");
  }
}

int kept_per_block(double ratio, int block_len) {
  const int k = static_cast<int>(static_cast<double>(block_len) / ratio);
  return std::clamp(k, 1, block_len);
}

// Selection order shared by prune, quantize and reprune: magnitude descending,
// ties toward the lower flat index.
template <typename Mag>
std::vector<int> top_indices(int n, int k, Mag magnitude) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](int a, int b) {
                      const auto ma = magnitude(a);
                      const auto mb = magnitude(b);
                      if (ma != mb) return ma > mb;
                      return a < b;
                    });
  order.resize(k);
  return order;
}

void check_frame_shape(const FrameHeader& h) {
  if (h.block_side <= 0 || h.channels <= 0 || h.channels % 2 != 0 || h.height <= 0 ||
      h.width <= 0 || h.height % h.block_side != 0 || h.width % h.block_side != 0) {
    throw FormatError("frame header has inconsistent dims");
  }
  check_bit_width(h.bit_width);
}

// Record-level sanity shared by decode_frame and deserialize_frame.
void check_records(const EncodedFrame& frame) {
  const int block_len = frame.header.block_side * frame.header.block_side;
  const int max_code = (1 << (frame.header.bit_width - 1)) - 1;
  const std::size_t expected =
      static_cast<std::size_t>(frame.header.channels) * frame.blocks_per_channel();
  if (frame.records.size() != expected) {
    throw CorruptPayloadError("record count does not match header dims");
  }
  for (const FrameRecord& rec : frame.records) {
    if (rec.indices.size() != rec.codes.size()) {
      throw CorruptPayloadError("index/code count mismatch");
    }
    if (!std::isfinite(rec.scale) || rec.scale < 0.0f) {
      throw CorruptPayloadError("invalid scale factor");
    }
    int prev = -1;
    for (std::uint16_t idx : rec.indices) {
      if (idx >= block_len) throw CorruptPayloadError("coefficient index out of range");
      if (static_cast<int>(idx) <= prev) {
        throw CorruptPayloadError("coefficient indices not ascending");
      }
      prev = idx;
    }
    for (std::int32_t code : rec.codes) {
      if (code < -max_code || code > max_code) {
        throw CorruptPayloadError("code overflow");
      }
    }
  }
}

}  // namespace

PrunedGrid prune(const BlockGrid& coeffs, double ratio) {
  check_ratio(ratio, coeffs.block_len);
  const int k = kept_per_block(ratio, coeffs.block_len);

  PrunedGrid out;
  out.coeffs = coeffs;
  std::fill(out.coeffs.data.begin(), out.coeffs.data.end(), 0.0f);
  out.kept_count.assign(static_cast<std::size_t>(coeffs.channels) * coeffs.blocks, k);
  out.threshold.resize(out.kept_count.size());

  for (int c = 0; c < coeffs.channels; ++c) {
    for (int b = 0; b < coeffs.blocks; ++b) {
      auto src = coeffs.block(c, b);
      auto dst = out.coeffs.block(c, b);
      const auto kept = top_indices(coeffs.block_len, k,
                                    [&](int m) { return std::fabs(src[m]); });
      for (int m : kept) dst[m] = src[m];
      out.threshold[static_cast<std::size_t>(c) * coeffs.blocks + b] =
          std::fabs(src[kept.back()]);
    }
  }
  return out;
}

QuantizedGrid quantize(const PrunedGrid& pruned, int bit_width) {
  check_bit_width(bit_width);
  const BlockGrid& grid = pruned.coeffs;

  QuantizedGrid out;
  out.channels = grid.channels;
  out.blocks = grid.blocks;
  out.block_len = grid.block_len;
  out.block_side = grid.block_side;
  out.tensor_height = grid.tensor_height;
  out.tensor_width = grid.tensor_width;
  out.bit_width = bit_width;
  out.records.resize(static_cast<std::size_t>(grid.channels) * grid.blocks);

  const int max_code = out.max_code();
  for (int c = 0; c < grid.channels; ++c) {
    for (int b = 0; b < grid.blocks; ++b) {
      auto src = grid.block(c, b);
      QuantizedBlock& rec = out.records[static_cast<std::size_t>(c) * grid.blocks + b];

      float peak = 0.0f;
      for (float v : src) peak = std::max(peak, std::fabs(v));
      if (peak == 0.0f) continue;  // all-zero block: scale 0, no codes

      // Rebuilding the kept set from the pruned grid reproduces the original
      // selection: kept magnitudes dominate discarded ones, and zero-valued
      // kept slots can only exist when everything discarded is zero too.
      const int k = pruned.kept_count[static_cast<std::size_t>(c) * grid.blocks + b];
      auto kept = top_indices(grid.block_len, k,
                              [&](int m) { return std::fabs(src[m]); });
      std::sort(kept.begin(), kept.end());

      // codes come from the exact Q/S ratio; the f32 scale is what ships
      const double delta = static_cast<double>(peak) / max_code;
      rec.scale = static_cast<float>(delta);
      rec.indices.reserve(kept.size());
      rec.codes.reserve(kept.size());
      for (int m : kept) {
        // round half to even, matching the default FP rounding mode
        const double scaled = static_cast<double>(src[m]) / delta;
        auto code = static_cast<std::int32_t>(std::nearbyint(scaled));
        code = std::clamp(code, -max_code, max_code);
        rec.indices.push_back(static_cast<std::uint16_t>(m));
        rec.codes.push_back(code);
      }
    }
  }
  return out;
}

PrunedGrid dequantize(const QuantizedGrid& q) {
  PrunedGrid out;
  out.coeffs.channels = q.channels;
  out.coeffs.blocks = q.blocks;
  out.coeffs.block_len = q.block_len;
  out.coeffs.block_side = q.block_side;
  out.coeffs.tensor_height = q.tensor_height;
  out.coeffs.tensor_width = q.tensor_width;
  out.coeffs.data.assign(static_cast<std::size_t>(q.channels) * q.blocks * q.block_len,
                         0.0f);
  out.kept_count.resize(q.records.size());
  out.threshold.resize(q.records.size());

  for (std::size_t r = 0; r < q.records.size(); ++r) {
    const QuantizedBlock& rec = q.records[r];
    const int c = static_cast<int>(r) / q.blocks;
    const int b = static_cast<int>(r) % q.blocks;
    auto dst = out.coeffs.block(c, b);
    float min_mag = 0.0f;
    for (std::size_t i = 0; i < rec.indices.size(); ++i) {
      const float v = static_cast<float>(static_cast<double>(rec.codes[i]) *
                                         static_cast<double>(rec.scale));
      dst[rec.indices[i]] = v;
      min_mag = (i == 0) ? std::fabs(v) : std::min(min_mag, std::fabs(v));
    }
    out.kept_count[r] = static_cast<int>(rec.indices.size());
    out.threshold[r] = min_mag;
  }
  return out;
}

std::uint64_t EncodedFrame::total_kept() const {
  std::uint64_t kept = 0;
  for (const FrameRecord& rec : records) kept += rec.codes.size();
  return kept;
}

std::uint64_t EncodedFrame::nominal_bits() const {
  return static_cast<std::uint64_t>(records.size()) * kScaleBits +
         total_kept() * static_cast<std::uint64_t>(header.bit_width);
}

std::uint64_t EncodedFrame::wire_bits() const {
  const int block_len = header.block_side * header.block_side;
  const std::uint64_t bitmap_bytes = (static_cast<std::uint64_t>(block_len) + 7) / 8;
  std::uint64_t bits = kArfHeaderBytes * 8;
  for (const FrameRecord& rec : records) {
    const std::uint64_t code_bytes =
        (rec.codes.size() * static_cast<std::uint64_t>(header.bit_width) + 7) / 8;
    bits += kScaleBits + 8 * bitmap_bytes + 8 * code_bytes;
  }
  return bits;
}

EncodedFrame encode_frame(const RadarTensor& x, double ratio, int bit_width,
                          int block_side, std::uint64_t frame_id) {
  x.validate();
  check_ratio(ratio, block_side * block_side);
  check_bit_width(bit_width);

  const auto basis = DctBasis::cached(block_side);
  BlockGrid coeffs = transform_grid(blockize(x, block_side), *basis,
                                    TransformDirection::forward);
  QuantizedGrid q = quantize(prune(coeffs, ratio), bit_width);

  EncodedFrame frame;
  frame.header.block_side = block_side;
  frame.header.bit_width = bit_width;
  frame.header.channels = x.channels;
  frame.header.height = x.height;
  frame.header.width = x.width;
  frame.header.requested_ratio = static_cast<float>(ratio);
  frame.header.frame_id = frame_id;
  frame.records.reserve(q.records.size());
  for (QuantizedBlock& rec : q.records) {
    frame.records.push_back(
        FrameRecord{rec.scale, std::move(rec.indices), std::move(rec.codes)});
  }
  return frame;
}

RadarTensor decode_frame(const EncodedFrame& frame) {
  check_frame_shape(frame.header);
  check_records(frame);

  QuantizedGrid q;
  q.channels = frame.header.channels;
  q.block_side = frame.header.block_side;
  q.block_len = q.block_side * q.block_side;
  q.blocks = frame.blocks_per_channel();
  q.tensor_height = frame.header.height;
  q.tensor_width = frame.header.width;
  q.bit_width = frame.header.bit_width;
  q.records.reserve(frame.records.size());
  for (const FrameRecord& rec : frame.records) {
    q.records.push_back(QuantizedBlock{rec.scale, rec.indices, rec.codes});
  }

  const auto basis = DctBasis::cached(q.block_side);
  BlockGrid coeffs = dequantize(q).coeffs;
  return merge(transform_grid(coeffs, *basis, TransformDirection::inverse));
}

EncodedFrame reprune(const EncodedFrame& frame, double new_ratio) {
  const int block_len = frame.header.block_side * frame.header.block_side;
  check_ratio(new_ratio, block_len);
  if (new_ratio < frame.header.requested_ratio) {
    throw InvalidArgument("reprune can only increase the pruning ratio");
  }
  const int k = kept_per_block(new_ratio, block_len);

  EncodedFrame out = frame;
  out.header.requested_ratio = static_cast<float>(new_ratio);
  for (FrameRecord& rec : out.records) {
    const int n = static_cast<int>(rec.codes.size());
    if (n <= k) continue;
    // |code| ranks identically to the dequantized magnitude |code| * scale.
    auto kept = top_indices(n, k, [&](int i) { return std::abs(rec.codes[i]); });
    std::sort(kept.begin(), kept.end());
    FrameRecord next;
    next.scale = rec.scale;
    next.indices.reserve(k);
    next.codes.reserve(k);
    for (int i : kept) {
      next.indices.push_back(rec.indices[i]);
      next.codes.push_back(rec.codes[i]);
    }
    rec = std::move(next);
  }
  return out;
}

BitRate bit_rate(const EncodedFrame& frame) {
  const double pixels = static_cast<double>(frame.header.channels) *
                        frame.header.height * frame.header.width;
  const double kept = static_cast<double>(frame.total_kept());

  BitRate rate;
  rate.value_bpp = frame.header.bit_width * kept / pixels;
  rate.nominal_bpp = static_cast<double>(frame.nominal_bits()) / pixels;
  rate.wire_bpp = static_cast<double>(frame.wire_bits()) / pixels;
  rate.effective_ratio = kept > 0.0 ? pixels / kept
                                    : std::numeric_limits<double>::infinity();
  rate.compression_ratio = rate.value_bpp > 0.0
                               ? 32.0 / rate.value_bpp
                               : std::numeric_limits<double>::infinity();
  return rate;
}

std::vector<std::uint8_t> serialize_frame(const EncodedFrame& frame) {
  check_frame_shape(frame.header);
  check_records(frame);
  const int block_len = frame.header.block_side * frame.header.block_side;
  const std::size_t bitmap_bytes = (static_cast<std::size_t>(block_len) + 7) / 8;

  std::vector<std::uint8_t> out;
  out.reserve(kArfHeaderBytes + frame.records.size() * (4 + bitmap_bytes));
  out.insert(out.end(), kArfMagic, kArfMagic + 4);
  put_u16(out, kArfVersion);
  put_u16(out, static_cast<std::uint16_t>(frame.header.block_side));
  out.push_back(static_cast<std::uint8_t>(frame.header.bit_width));
  put_u16(out, static_cast<std::uint16_t>(frame.header.channels));
  put_u32(out, static_cast<std::uint32_t>(frame.header.height));
  put_u32(out, static_cast<std::uint32_t>(frame.header.width));
  put_f32(out, frame.header.requested_ratio);
  put_u64(out, frame.header.frame_id);

  const std::uint32_t code_mask = (1u << frame.header.bit_width) - 1u;
  for (const FrameRecord& rec : frame.records) {
    put_f32(out, rec.scale);
    std::vector<std::uint8_t> bitmap(bitmap_bytes, 0);
    for (std::uint16_t idx : rec.indices) {
      bitmap[idx >> 3] |= static_cast<std::uint8_t>(1u << (7 - (idx & 7)));
    }
    out.insert(out.end(), bitmap.begin(), bitmap.end());
    BitWriter writer(out);
    for (std::int32_t code : rec.codes) {
      writer.put(static_cast<std::uint32_t>(code) & code_mask, frame.header.bit_width);
    }
    writer.align();
  }
  return out;
}

EncodedFrame deserialize_frame(std::span<const std::uint8_t> bytes) {
  ByteReader reader(bytes);
  reader.require(kArfHeaderBytes);
  char magic[4];
  auto magic_bytes = reader.bytes(4);
  std::memcpy(magic, magic_bytes.data(), 4);
  if (std::memcmp(magic, kArfMagic, 4) != 0) throw FormatError("ARF: bad magic");
  if (reader.u16() != kArfVersion) throw FormatError("ARF: unsupported version");

  EncodedFrame frame;
  frame.header.block_side = reader.u16();
  frame.header.bit_width = reader.u8();
  frame.header.channels = reader.u16();
  frame.header.height = static_cast<int>(reader.u32());
  frame.header.width = static_cast<int>(reader.u32());
  frame.header.requested_ratio = reader.f32();
  frame.header.frame_id = reader.u64();
  try {
    check_frame_shape(frame.header);
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }

  const int block_len = frame.header.block_side * frame.header.block_side;
  const std::size_t bitmap_bytes = (static_cast<std::size_t>(block_len) + 7) / 8;
  const int bit_width = frame.header.bit_width;
  const int max_code = (1 << (bit_width - 1)) - 1;
  const std::size_t record_count =
      static_cast<std::size_t>(frame.header.channels) * frame.blocks_per_channel();

  frame.records.resize(record_count);
  for (FrameRecord& rec : frame.records) {
    rec.scale = reader.f32();
    if (!std::isfinite(rec.scale) || rec.scale < 0.0f) {
      throw CorruptPayloadError("invalid scale factor");
    }
    auto bitmap = reader.bytes(bitmap_bytes);
    for (std::size_t byte = 0; byte < bitmap_bytes; ++byte) {
      if (bitmap[byte] == 0) continue;
      for (int bit = 0; bit < 8; ++bit) {
        if (!(bitmap[byte] & (1u << (7 - bit)))) continue;
        const int idx = static_cast<int>(byte) * 8 + bit;
        if (idx >= block_len) {
          throw CorruptPayloadError("coefficient index out of range");
        }
        rec.indices.push_back(static_cast<std::uint16_t>(idx));
      }
    }
    const std::size_t code_bytes =
        (rec.indices.size() * static_cast<std::size_t>(bit_width) + 7) / 8;
    BitReader bits(reader.bytes(code_bytes));
    rec.codes.reserve(rec.indices.size());
    for (std::size_t i = 0; i < rec.indices.size(); ++i) {
      std::uint32_t raw = bits.get(bit_width);
      std::int32_t code;
      if (raw & (1u << (bit_width - 1))) {
        code = static_cast<std::int32_t>(raw | ~((1u << bit_width) - 1u));
      } else {
        code = static_cast<std::int32_t>(raw);
      }
      if (code < -max_code || code > max_code) {
        throw CorruptPayloadError("code overflow");
      }
      rec.codes.push_back(code);
    }
  }
  if (reader.remaining() != 0) throw CorruptPayloadError("trailing data after frame");
  return frame;
}

EncodedFrame read_arf(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_frame(bytes);
}

void write_arf(const EncodedFrame& frame, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = serialize_frame(frame);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("ARF: write failed");
}

}  // namespace adaradar
