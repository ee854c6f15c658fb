#include "adaradar/codec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "adaradar/errors.hpp"
#include "adaradar/metrics.hpp"
#include "helpers.hpp"

using namespace adaradar;
using adaradar::testing::random_tensor;
using adaradar::testing::sparse_scene_spec;

namespace {

// Brute-force selection oracle: sort all (magnitude, index) pairs and keep the
// top k, lower index first on ties.
std::vector<int> reference_top_k(std::span<const float> values, int k) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (std::fabs(values[a]) != std::fabs(values[b])) {
      return std::fabs(values[a]) > std::fabs(values[b]);
    }
    return a < b;
  });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

BlockGrid grid_from_block(const std::vector<float>& block, int block_side) {
  BlockGrid g;
  g.channels = 2;
  g.blocks = 1;
  g.block_side = block_side;
  g.block_len = block_side * block_side;
  g.tensor_height = block_side;
  g.tensor_width = block_side;
  g.data = block;
  g.data.insert(g.data.end(), block.begin(), block.end());  // second channel copy
  return g;
}

double tensor_energy(const RadarTensor& x) {
  double acc = 0.0;
  for (float v : x.data) acc += static_cast<double>(v) * v;
  return acc;
}

}  // namespace

TEST(Prune, RatioOneKeepsEverything) {
  const RadarTensor x = random_tensor(2, 16, 16, 1);
  const auto basis = DctBasis::cached(8);
  const BlockGrid z = transform_grid(blockize(x, 8), *basis, TransformDirection::forward);
  const PrunedGrid p = prune(z, 1.0);
  EXPECT_EQ(p.coeffs.data, z.data);
  for (int k : p.kept_count) EXPECT_EQ(k, 64);
}

TEST(Prune, KeptCountFollowsFloor) {
  const RadarTensor x = random_tensor(2, 16, 16, 2);
  const auto basis = DctBasis::cached(8);
  const BlockGrid z = transform_grid(blockize(x, 8), *basis, TransformDirection::forward);
  const PrunedGrid p = prune(z, 4.0);
  for (int k : p.kept_count) EXPECT_EQ(k, 16);
  for (int c = 0; c < z.channels; ++c) {
    for (int b = 0; b < z.blocks; ++b) {
      auto blk = p.coeffs.block(c, b);
      EXPECT_EQ(std::count_if(blk.begin(), blk.end(), [](float v) { return v != 0.0f; }),
                16);
    }
  }
}

TEST(Prune, TieBreaksTowardLowerIndex) {
  std::vector<float> block(16, 0.0f);
  block[0] = 5.0f;
  block[1] = -5.0f;
  block[2] = 3.0f;
  const BlockGrid g = grid_from_block(block, 4);
  const PrunedGrid p = prune(g, 8.0);  // k = 2
  auto pruned = p.coeffs.block(0, 0);
  EXPECT_EQ(pruned[0], 5.0f);
  EXPECT_EQ(pruned[1], -5.0f);
  for (int m = 2; m < 16; ++m) EXPECT_EQ(pruned[m], 0.0f);
  EXPECT_EQ(p.threshold[0], 5.0f);
  EXPECT_EQ(p.kept_count[0], 2);
}

TEST(Prune, MatchesBruteForceOracle) {
  const RadarTensor x = random_tensor(2, 16, 16, 3);
  const auto basis = DctBasis::cached(4);
  const BlockGrid z = transform_grid(blockize(x, 4), *basis, TransformDirection::forward);
  for (double r : {1.5, 3.0, 7.9, 16.0}) {
    const PrunedGrid p = prune(z, r);
    const int k = p.kept_count[0];
    for (int c = 0; c < z.channels; ++c) {
      for (int b = 0; b < z.blocks; ++b) {
        auto src = z.block(c, b);
        auto kept = reference_top_k(src, k);
        auto dst = p.coeffs.block(c, b);
        for (int m = 0; m < z.block_len; ++m) {
          const bool in_kept = std::binary_search(kept.begin(), kept.end(), m);
          EXPECT_EQ(dst[m], in_kept ? src[m] : 0.0f);
        }
      }
    }
  }
}

TEST(Prune, RejectsOutOfRangeRatio) {
  const RadarTensor x = random_tensor(2, 8, 8, 4);
  const auto basis = DctBasis::cached(8);
  const BlockGrid z = transform_grid(blockize(x, 8), *basis, TransformDirection::forward);
  EXPECT_THROW(prune(z, 0.5), InvalidArgument);
  EXPECT_THROW(prune(z, 65.0), InvalidArgument);
}

TEST(Quantize, PeakMapsToMaxCode) {
  std::vector<float> block(16, 0.0f);
  block[3] = 12.5f;
  block[7] = -2.0f;
  const PrunedGrid p = prune(grid_from_block(block, 4), 8.0);
  const QuantizedGrid q = quantize(p, 4);
  EXPECT_EQ(q.max_code(), 7);
  const auto& rec = q.records[0];
  ASSERT_EQ(rec.indices.size(), 2u);
  EXPECT_EQ(rec.indices[0], 3);
  EXPECT_EQ(rec.codes[0], 7);
}

TEST(Quantize, AllZeroBlockHasNoCodes) {
  std::vector<float> block(16, 0.0f);
  const PrunedGrid p = prune(grid_from_block(block, 4), 2.0);
  const QuantizedGrid q = quantize(p, 8);
  for (const auto& rec : q.records) {
    EXPECT_EQ(rec.scale, 0.0f);
    EXPECT_TRUE(rec.indices.empty());
    EXPECT_TRUE(rec.codes.empty());
  }
}

// Hand-computed via the stated formulas (delta = 10/7, round half to even).
TEST(Quantize, HandComputedCodes) {
  std::vector<float> block(16, 0.0f);
  block[0] = 10.0f;
  block[1] = -5.0f;
  block[2] = 2.4f;
  const PrunedGrid p = prune(grid_from_block(block, 4), 5.0);  // k = 3
  const QuantizedGrid q = quantize(p, 4);
  const auto& rec = q.records[0];
  ASSERT_EQ(rec.codes.size(), 3u);
  EXPECT_NEAR(rec.scale, 10.0 / 7.0, 1e-6);
  EXPECT_EQ(rec.codes[0], 7);
  EXPECT_EQ(rec.codes[1], -4);
  EXPECT_EQ(rec.codes[2], 2);

  const PrunedGrid back = dequantize(q);
  auto vals = back.coeffs.block(0, 0);
  EXPECT_NEAR(vals[0], 10.0, 1e-5);
  EXPECT_NEAR(vals[1], -5.714285, 1e-4);
  EXPECT_NEAR(vals[2], 2.857142, 1e-4);
}

TEST(Quantize, RejectsBadBitWidth) {
  std::vector<float> block(16, 1.0f);
  const PrunedGrid p = prune(grid_from_block(block, 4), 2.0);
  EXPECT_THROW(quantize(p, 1), InvalidArgument);
  EXPECT_THROW(quantize(p, 17), InvalidArgument);
}

TEST(Dequantize, ZeroCodesGiveZeros) {
  QuantizedGrid q;
  q.channels = 2;
  q.blocks = 1;
  q.block_side = 4;
  q.block_len = 16;
  q.tensor_height = 4;
  q.tensor_width = 4;
  q.bit_width = 8;
  q.records.resize(2);
  q.records[0].scale = 1.5f;
  q.records[0].indices = {1, 5};
  q.records[0].codes = {0, 0};
  const PrunedGrid p = dequantize(q);
  for (float v : p.coeffs.data) EXPECT_EQ(v, 0.0f);
}

TEST(Dequantize, ErrorBoundPerBlock) {
  const Scene scene = generate_scene(sparse_scene_spec(42, 1.0));
  const auto basis = DctBasis::cached(8);
  const BlockGrid z =
      transform_grid(blockize(scene.tensor, 8), *basis, TransformDirection::forward);
  const PrunedGrid p = prune(z, 3.0);
  const QuantizedGrid q = quantize(p, 8);
  const PrunedGrid back = dequantize(q);

  for (int c = 0; c < z.channels; ++c) {
    for (int b = 0; b < z.blocks; ++b) {
      const auto& rec = q.records[static_cast<std::size_t>(c) * z.blocks + b];
      auto orig = p.coeffs.block(c, b);
      auto rest = back.coeffs.block(c, b);
      float peak = 0.0f;
      for (float v : orig) peak = std::max(peak, std::fabs(v));
      const double bound = peak / (2.0 * 127.0) + 1e-9 * peak;
      for (std::size_t i = 0; i < rec.indices.size(); ++i) {
        const int m = rec.indices[i];
        EXPECT_LE(std::fabs(static_cast<double>(orig[m]) - rest[m]), bound);
      }
    }
  }
}

TEST(EncodeFrame, ZeroTensorHasScaleOnlyPayload) {
  const RadarTensor x = RadarTensor::zeros(2, 16, 16);
  const EncodedFrame f = encode_frame(x, 4.0, 8, 8);
  for (const auto& rec : f.records) {
    EXPECT_EQ(rec.scale, 0.0f);
    EXPECT_TRUE(rec.codes.empty());
  }
  const BitRate rate = bit_rate(f);
  EXPECT_DOUBLE_EQ(rate.value_bpp, 0.0);
  EXPECT_DOUBLE_EQ(rate.nominal_bpp, 32.0 / 64.0);
}

TEST(EncodeFrame, RadialShapedTableEntry) {
  // 32x512x256, M = 64, s = 4, r = 12.57: value bpp rounds to the published 0.32
  const RadarTensor x = random_tensor(32, 512, 256, 77);
  const EncodedFrame f = encode_frame(x, 12.57, 4, 64);
  const BitRate rate = bit_rate(f);
  EXPECT_NEAR(std::round(rate.value_bpp * 100.0) / 100.0, 0.32, 1e-12);
  EXPECT_GT(rate.compression_ratio, 100.0);
}

TEST(EncodeFrame, Deterministic) {
  const Scene scene = generate_scene(sparse_scene_spec(5, 0.5));
  const EncodedFrame a = encode_frame(scene.tensor, 6.3, 6, 8, 99);
  const EncodedFrame b = encode_frame(scene.tensor, 6.3, 6, 8, 99);
  EXPECT_EQ(a, b);
  EXPECT_EQ(serialize_frame(a), serialize_frame(b));
}

TEST(DecodeFrame, NearLosslessAtFullPrecision) {
  const Scene scene = generate_scene(sparse_scene_spec(6, 1.0));
  const EncodedFrame f = encode_frame(scene.tensor, 1.0, 16, 8);
  const RadarTensor y = decode_frame(f);
  EXPECT_GT(snr_db(scene.tensor, y), 80.0);
}

TEST(DecodeFrame, RejectsOutOfRangeIndex) {
  const RadarTensor x = random_tensor(2, 8, 8, 8);
  EncodedFrame f = encode_frame(x, 2.0, 4, 8);
  f.records[0].indices.back() = 64;  // >= M^2
  EXPECT_THROW(decode_frame(f), CorruptPayloadError);
}

TEST(DecodeFrame, ZeroRoundTrip) {
  const RadarTensor x = RadarTensor::zeros(2, 16, 16);
  const RadarTensor y = decode_frame(encode_frame(x, 8.0, 4, 8));
  EXPECT_EQ(y, x);
}

TEST(Reprune, SameRatioIsIdentity) {
  const Scene scene = generate_scene(sparse_scene_spec(9, 0.3));
  const EncodedFrame f = encode_frame(scene.tensor, 4.0, 8, 8);
  EXPECT_EQ(reprune(f, 4.0), f);
}

TEST(Reprune, KeptSetsNest) {
  const Scene scene = generate_scene(sparse_scene_spec(10, 0.8));
  const EncodedFrame f4 = encode_frame(scene.tensor, 4.0, 8, 8);
  const EncodedFrame f8 = reprune(f4, 8.0);
  for (std::size_t r = 0; r < f4.records.size(); ++r) {
    for (std::uint16_t idx : f8.records[r].indices) {
      EXPECT_TRUE(std::binary_search(f4.records[r].indices.begin(),
                                     f4.records[r].indices.end(), idx));
    }
  }
}

TEST(Reprune, MatchesFullReencodeAtHighPrecision) {
  const Scene scene = generate_scene(sparse_scene_spec(11, 0.0));
  const EncodedFrame f4 = encode_frame(scene.tensor, 4.0, 16, 8);
  const EncodedFrame direct = encode_frame(scene.tensor, 8.0, 16, 8);
  EXPECT_EQ(reprune(f4, 8.0), direct);
}

TEST(Reprune, RejectsSmallerRatio) {
  const RadarTensor x = random_tensor(2, 8, 8, 12);
  const EncodedFrame f = encode_frame(x, 4.0, 8, 8);
  EXPECT_THROW(reprune(f, 2.0), InvalidArgument);
}

TEST(BitRate, SmallFrameArithmetic) {
  const RadarTensor x = random_tensor(2, 2, 2, 13);
  const EncodedFrame f = encode_frame(x, 2.0, 4, 2);  // k = 2 of 4 per block
  const BitRate rate = bit_rate(f);
  // pixels = 8; kept = 2 blocks * 2; scales = 2
  EXPECT_DOUBLE_EQ(rate.value_bpp, 4.0 * 4.0 / 8.0);
  EXPECT_DOUBLE_EQ(rate.nominal_bpp, (2.0 * 32.0 + 4.0 * 4.0) / 8.0);
  EXPECT_DOUBLE_EQ(rate.effective_ratio, 2.0);
  EXPECT_DOUBLE_EQ(rate.compression_ratio, 32.0 / rate.value_bpp);
  // wire: 31-byte header + 2 * (4B scale + 1B bitmap + 1B codes)
  EXPECT_EQ(f.wire_bits(), 31u * 8u + 2u * (32u + 8u + 8u));
}

// Parseval ties the spatial error to discarded plus quantization energy. The
// identity is evaluated in 64-bit against the exact transform of the input,
// with pruning decisions and codes taken from the production float pipeline.
TEST(Invariants, OrthonormalErrorIdentity) {
  const Scene scene = generate_scene(sparse_scene_spec(14, 1.5));
  const auto basis = DctBasis::cached(8);
  const BlockGrid spatial = blockize(scene.tensor, 8);
  const BlockGrid z = transform_grid(spatial, *basis, TransformDirection::forward);
  const int len = z.block_len;

  for (const auto& [ratio, bits] : std::vector<std::pair<double, int>>{
           {1.0, 16}, {2.5, 8}, {6.0, 4}, {12.0, 10}, {32.0, 3}}) {
    const QuantizedGrid q = quantize(prune(z, ratio), bits);

    double err = 0.0, discarded = 0.0, residual = 0.0;
    std::vector<double> block_d(len), z_d(len), zhat_d(len), xhat_d(len);
    for (int c = 0; c < z.channels; ++c) {
      for (int b = 0; b < z.blocks; ++b) {
        auto src = spatial.block(c, b);
        for (int m = 0; m < len; ++m) block_d[m] = src[m];
        dct_forward(block_d, *basis, z_d);

        const auto& rec = q.records[static_cast<std::size_t>(c) * z.blocks + b];
        std::fill(zhat_d.begin(), zhat_d.end(), 0.0);
        std::vector<bool> kept(len, false);
        for (std::size_t i = 0; i < rec.indices.size(); ++i) {
          zhat_d[rec.indices[i]] =
              static_cast<double>(rec.codes[i]) * static_cast<double>(rec.scale);
          kept[rec.indices[i]] = true;
        }
        for (int m = 0; m < len; ++m) {
          if (kept[m]) {
            residual += (z_d[m] - zhat_d[m]) * (z_d[m] - zhat_d[m]);
          } else {
            discarded += z_d[m] * z_d[m];
          }
        }
        dct_inverse(zhat_d, *basis, xhat_d);
        for (int m = 0; m < len; ++m) {
          err += (block_d[m] - xhat_d[m]) * (block_d[m] - xhat_d[m]);
        }
      }
    }
    const double expected = discarded + residual;
    EXPECT_LT(std::fabs(err - expected) / std::max(expected, 1e-30), 1e-5)
        << "r=" << ratio << " s=" << bits;
  }
}

// The shipped float decoder tracks the 64-bit reconstruction to within the
// transform's 32-bit round-trip tolerance.
TEST(Invariants, FloatDecodeTracksDoublePath) {
  const Scene scene = generate_scene(sparse_scene_spec(14, 1.5));
  const EncodedFrame frame = encode_frame(scene.tensor, 2.5, 8, 8);
  const RadarTensor decoded = decode_frame(frame);

  const auto basis = DctBasis::cached(8);
  const int len = basis->block_len();
  BlockGrid grid = blockize(scene.tensor, 8);  // reuse layout
  std::fill(grid.data.begin(), grid.data.end(), 0.0f);
  std::vector<double> zhat_d(len), xhat_d(len);
  for (int c = 0; c < grid.channels; ++c) {
    for (int b = 0; b < grid.blocks; ++b) {
      const auto& rec = frame.records[static_cast<std::size_t>(c) * grid.blocks + b];
      std::fill(zhat_d.begin(), zhat_d.end(), 0.0);
      for (std::size_t i = 0; i < rec.indices.size(); ++i) {
        zhat_d[rec.indices[i]] =
            static_cast<double>(rec.codes[i]) * static_cast<double>(rec.scale);
      }
      dct_inverse(zhat_d, *basis, xhat_d);
      auto dst = grid.block(c, b);
      for (int m = 0; m < len; ++m) dst[m] = static_cast<float>(xhat_d[m]);
    }
  }
  const RadarTensor reference = merge(grid);
  ASSERT_EQ(reference.data.size(), decoded.data.size());
  for (std::size_t i = 0; i < decoded.data.size(); ++i) {
    EXPECT_NEAR(decoded.data[i], reference.data[i], 1e-4);
  }
}

TEST(Invariants, MonotoneRateDistortion) {
  const Scene scene = generate_scene(sparse_scene_spec(15, 1.0));
  double last_snr = 1e9;
  for (double r : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
    const RadarTensor y = decode_frame(encode_frame(scene.tensor, r, 16, 8));
    const double snr = snr_db(scene.tensor, y);
    EXPECT_LE(snr, last_snr + 1e-6) << "r=" << r;
    last_snr = snr;
  }
}

TEST(Invariants, ScaleOverheadConstant) {
  // one 32-bit scale per M^2 coefficients at s = 8
  const double overhead = 32.0 / (8.0 * 64.0 * 64.0);
  EXPECT_NEAR(overhead, 0.000977, 1e-6);
}

TEST(Serialize, RoundTrip) {
  const Scene scene = generate_scene(sparse_scene_spec(16, 0.7));
  const EncodedFrame f = encode_frame(scene.tensor, 5.0, 4, 8, 1234);
  const auto bytes = serialize_frame(f);
  EXPECT_EQ(deserialize_frame(bytes), f);
}

TEST(Serialize, BadMagic) {
  const RadarTensor x = random_tensor(2, 8, 8, 17);
  auto bytes = serialize_frame(encode_frame(x, 2.0, 4, 8));
  bytes[0] = 'X';
  EXPECT_THROW(deserialize_frame(bytes), FormatError);
}

TEST(Serialize, Truncated) {
  const RadarTensor x = random_tensor(2, 8, 8, 18);
  auto bytes = serialize_frame(encode_frame(x, 2.0, 4, 8));
  bytes.resize(bytes.size() - 3);
  EXPECT_THROW(deserialize_frame(bytes), CorruptPayloadError);
}

TEST(Serialize, PaddingBitInBitmapIsOutOfRangeIndex) {
  // M = 2 leaves four padding bits in each record's bitmap byte
  const RadarTensor x = random_tensor(2, 2, 2, 19);
  auto bytes = serialize_frame(encode_frame(x, 1.0, 4, 2));
  const std::size_t first_bitmap = 31 + 4;  // header + first record's scale
  bytes[first_bitmap] |= 0x01;  // lowest bit = index 7 >= M^2
  try {
    deserialize_frame(bytes);
    FAIL() << "expected CorruptPayloadError";
  } catch (const CorruptPayloadError& e) {
    EXPECT_NE(std::string(e.what()).find("index out of range"), std::string::npos);
  }
}

TEST(Serialize, CodeOverflow) {
  // patch the first 4-bit code to 0b1000 = -8, outside [-7, 7]; the record
  // layout (2 kept indices, 1 code byte) stays intact
  const RadarTensor x = random_tensor(2, 2, 2, 23);
  const EncodedFrame f = encode_frame(x, 2.0, 4, 2);
  ASSERT_EQ(f.records[0].codes.size(), 2u);
  auto bytes = serialize_frame(f);
  // first record: scale at 31, bitmap byte at 35, code byte at 36
  bytes[36] = static_cast<std::uint8_t>(0x80 | (bytes[36] & 0x0f));
  try {
    deserialize_frame(bytes);
    FAIL() << "expected CorruptPayloadError";
  } catch (const CorruptPayloadError& e) {
    EXPECT_NE(std::string(e.what()).find("code overflow"), std::string::npos);
  }
}

TEST(Invariants, TopKNesting) {
  const Scene scene = generate_scene(sparse_scene_spec(24, 1.2));
  const auto basis = DctBasis::cached(8);
  const BlockGrid z =
      transform_grid(blockize(scene.tensor, 8), *basis, TransformDirection::forward);
  const PrunedGrid coarse = prune(z, 16.0);
  const PrunedGrid fine = prune(z, 4.0);
  for (std::size_t i = 0; i < z.data.size(); ++i) {
    if (coarse.coeffs.data[i] != 0.0f) {
      EXPECT_EQ(coarse.coeffs.data[i], fine.coeffs.data[i]);
    }
  }
}
