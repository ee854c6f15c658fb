// Acceptance suite: runs every contract criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code = number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "adaradar/baselines.hpp"
#include "adaradar/codec.hpp"
#include "adaradar/dct.hpp"
#include "adaradar/errors.hpp"
#include "adaradar/metrics.hpp"
#include "adaradar/oracle.hpp"
#include "adaradar/plot.hpp"
#include "adaradar/rate_control.hpp"
#include "adaradar/rng.hpp"
#include "adaradar/sweep.hpp"
#include "adaradar/tensor.hpp"
#include "fixture_specs.hpp"
#include "naive_dct.hpp"

using namespace adaradar;

namespace {

#ifndef ADARADAR_FIXTURE_DIR
#define ADARADAR_FIXTURE_DIR "tests/fixtures"
#endif

struct Criterion {
  int number;
  std::string name;
  double runtime_limit_s;
  std::function<bool(std::string&)> body;
};

double round2(double v) { return std::round(v * 100.0) / 100.0; }

bool nearly(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// ---------------------------------------------------------------------------
// 1. Published bit-rate arithmetic.
bool table_reproduction(std::string& detail) {
  ControlParams p;
  p.block_side = 64;
  p.r_max = 4096.0;

  struct Entry {
    int bits;
    double ratio;
    double published;
  };
  const std::vector<Entry> spectral = {
      {4, 12.57, 0.32}, {4, 13.83, 0.29}, {4, 16.09, 0.25}, {4, 20.75, 0.19},
      {4, 27.91, 0.14}, {8, 29.26, 0.27}, {8, 7.5, 1.07}};
  for (const Entry& e : spectral) {
    p.bit_width = e.bits;
    const double got = round2(bpp_of(e.ratio, p));
    if (got != e.published) {
      detail = "bpp_of(" + std::to_string(e.ratio) + ", s=" + std::to_string(e.bits) +
               ") rounds to " + std::to_string(got) + " not " +
               std::to_string(e.published);
      return false;
    }
  }
  const std::vector<std::pair<double, double>> index_value = {
      {12.0, 2.67}, {29.0, 1.10}, {7.5, 4.27}};
  for (const auto& [ratio, published] : index_value) {
    const double got = round2(iv_value_bpp_for_ratio(ratio));
    if (got != published) {
      detail = "index-value bpp at r=" + std::to_string(ratio) + " rounds to " +
               std::to_string(got);
      return false;
    }
  }
  detail = "10 published BR entries reproduced after 2-decimal rounding";
  return true;
}

// ---------------------------------------------------------------------------
// 2. Scale-factor overhead constant.
bool scale_overhead(std::string& detail) {
  const double overhead = 32.0 / (8.0 * 64.0 * 64.0);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "32/(8*64^2) = %.9f vs 0.000977", overhead);
  detail = buf;
  return nearly(overhead, 0.000977, 1e-6);
}

// ---------------------------------------------------------------------------
// 3. Transform correctness across block sides.
bool transform_correctness(std::string& detail) {
  Rng rng(5150);
  for (int m : {2, 4, 8, 16, 32, 64}) {
    const DctBasis basis(m);
    const int len = m * m;
    std::vector<double> block(len), coeffs(len), back(len);
    std::vector<float> block32(len);
    const int trials = 1000 / 6 + 1;  // ~1000 blocks total across the six sides
    for (int t = 0; t < trials; ++t) {
      for (int i = 0; i < len; ++i) {
        block[i] = rng.normal();
        block32[i] = static_cast<float>(block[i]);
      }
      // 64-bit path
      dct_forward(block, basis, coeffs);
      dct_inverse(coeffs, basis, back);
      double max_err = 0.0, ex = 0.0, ez = 0.0;
      for (int i = 0; i < len; ++i) {
        max_err = std::max(max_err, std::fabs(back[i] - block[i]));
        ex += block[i] * block[i];
        ez += coeffs[i] * coeffs[i];
      }
      if (max_err >= 1e-10) {
        detail = "64-bit round-trip error " + std::to_string(max_err) +
                 " at M=" + std::to_string(m);
        return false;
      }
      if (std::fabs(ez - ex) / ex >= 1e-6) {
        detail = "Parseval violation at M=" + std::to_string(m);
        return false;
      }
      // 32-bit storage path
      std::vector<double> in64(len);
      for (int i = 0; i < len; ++i) in64[i] = block32[i];
      dct_forward(in64, basis, coeffs);
      for (int i = 0; i < len; ++i) coeffs[i] = static_cast<float>(coeffs[i]);
      dct_inverse(coeffs, basis, back);
      for (int i = 0; i < len; ++i) {
        if (std::fabs(static_cast<float>(back[i]) - block32[i]) >= 1e-4) {
          detail = "32-bit round-trip error at M=" + std::to_string(m);
          return false;
        }
      }
    }
  }
  // naive O(M^4) oracle for the small sides
  for (int m : {2, 4, 8}) {
    const DctBasis basis(m);
    const adaradar::testing::NaiveDct naive(m);
    const int len = m * m;
    std::vector<double> block(len), coeffs(len);
    for (int t = 0; t < 25; ++t) {
      for (double& v : block) v = rng.normal();
      dct_forward(block, basis, coeffs);
      const auto expected = naive.forward(block);
      double scale = 1.0;
      for (double v : expected) scale = std::max(scale, std::fabs(v));
      for (int i = 0; i < len; ++i) {
        if (std::fabs(coeffs[i] - expected[i]) >= 1e-10 * scale) {
          detail = "naive-oracle mismatch at M=" + std::to_string(m);
          return false;
        }
      }
    }
  }
  detail = "round-trip, Parseval and naive-oracle checks over M in {2..64}";
  return true;
}

// ---------------------------------------------------------------------------
// 4. Energy identity over random (r, s) configurations.
bool energy_identity(std::string& detail) {
  Rng rng(7208);
  const auto basis = DctBasis::cached(8);
  const int len = basis->block_len();
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    SceneSpec spec;
    spec.channels = 2;
    spec.height = 32;
    spec.width = 32;
    spec.noise_sigma = 0.2 + 1.5 * rng.uniform();
    spec.seed = 9000 + trial;
    spec.targets = {{static_cast<int>(rng.below(32)), static_cast<int>(rng.below(32)),
                     5.0 + 30.0 * rng.uniform(), 2.0 * rng.uniform() - 1.0}};
    const Scene scene = generate_scene(spec);

    const double ratio = std::pow(64.0, rng.uniform());  // log-uniform in [1, 64]
    const int bits = 2 + static_cast<int>(rng.below(15));

    const BlockGrid spatial = blockize(scene.tensor, 8);
    const BlockGrid z = transform_grid(spatial, *basis, TransformDirection::forward);
    const QuantizedGrid q = quantize(prune(z, ratio), bits);

    double err = 0.0, expected = 0.0;
    std::vector<double> block_d(len), z_d(len), zhat_d(len), xhat_d(len);
    for (int c = 0; c < z.channels; ++c) {
      for (int b = 0; b < z.blocks; ++b) {
        auto src = spatial.block(c, b);
        for (int i = 0; i < len; ++i) block_d[i] = src[i];
        dct_forward(block_d, *basis, z_d);
        const auto& rec = q.records[static_cast<std::size_t>(c) * z.blocks + b];
        std::fill(zhat_d.begin(), zhat_d.end(), 0.0);
        for (std::size_t i = 0; i < rec.indices.size(); ++i) {
          zhat_d[rec.indices[i]] =
              static_cast<double>(rec.codes[i]) * static_cast<double>(rec.scale);
        }
        for (int i = 0; i < len; ++i) {
          expected += (z_d[i] - zhat_d[i]) * (z_d[i] - zhat_d[i]);
        }
        dct_inverse(zhat_d, *basis, xhat_d);
        for (int i = 0; i < len; ++i) {
          err += (block_d[i] - xhat_d[i]) * (block_d[i] - xhat_d[i]);
        }
      }
    }
    const double rel = std::fabs(err - expected) / std::max(expected, 1e-30);
    worst = std::max(worst, rel);
    if (rel >= 1e-5) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "violation %.3e at r=%.3f s=%d", rel, ratio,
                    bits);
      detail = buf;
      return false;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "worst relative gap %.3e over 100 configs", worst);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------------------
// 5. Rate-distortion monotonicity plus the steep-then-flat curve.
bool rate_distortion(std::string& detail) {
  const std::vector<double> grid = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  std::vector<double> mean_snr(grid.size(), 0.0);
  std::vector<double> mean_bpp(grid.size(), 0.0);
  Rng rng(6022);
  for (int scene_idx = 0; scene_idx < 50; ++scene_idx) {
    SceneSpec spec;
    spec.channels = 2;
    spec.height = 64;
    spec.width = 64;
    spec.noise_sigma = 0.3 + 1.2 * rng.uniform();
    spec.seed = 100 + scene_idx;
    const int n_targets = 1 + static_cast<int>(rng.below(3));
    for (int t = 0; t < n_targets; ++t) {
      spec.targets.push_back({static_cast<int>(rng.below(64)),
                              static_cast<int>(rng.below(64)),
                              8.0 + 30.0 * rng.uniform(), 2.0 * rng.uniform() - 1.0});
    }
    const Scene scene = generate_scene(spec);
    double last = 1e300;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const EncodedFrame frame = encode_frame(scene.tensor, grid[i], 16, 8);
      const double snr = snr_db(scene.tensor, decode_frame(frame));
      if (snr > last + 1e-6) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "scene %d: SNR rose %.6f -> %.6f at r=%g",
                      scene_idx, last, snr, grid[i]);
        detail = buf;
        return false;
      }
      last = snr;
      mean_snr[i] += snr / 50.0;
      mean_bpp[i] += bit_rate(frame).value_bpp / 50.0;
    }
  }

  // curve shape: the drop from r=1 to r=4 dominates the tail from r=4 to r=32
  const double head_drop = mean_snr[0] - mean_snr[2];
  const double tail_drop = mean_snr[2] - mean_snr[5];
  if (!(head_drop > tail_drop)) {
    detail = "curve is not steep-then-flat";
    return false;
  }

  CsvTable table;
  table.columns = {"variant", "M", "s", "value_bpp", "snr_db"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    table.rows.push_back({"spectral", "8", "16", std::to_string(mean_bpp[i]),
                          std::to_string(mean_snr[i])});
  }
  emit_plot(table, PlotKind::rate_snr, "acceptance_rate_snr.svg",
            "acceptance criterion 5 mean curve");

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "monotone over 50 scenes; head drop %.1f dB > tail drop %.1f dB; "
                "curve in acceptance_rate_snr.svg",
                head_drop, tail_drop);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------------------
// 6. Controller contract over a 200-frame sequence.
bool controller_contract(std::string& detail) {
  SequenceSpec seq;
  seq.scene.channels = 2;
  seq.scene.height = 64;
  seq.scene.width = 64;
  seq.scene.noise_sigma = 0.0;
  seq.scene.seed = 404;
  seq.scene.targets = {{14, 22, 30.0, 0.4}, {40, 48, 22.0, -0.7}, {52, 12, 26.0, 1.0}};
  seq.frames = 200;
  const auto scenes = generate_sequence(seq);
  std::vector<RadarTensor> frames;
  frames.reserve(scenes.size());
  for (const Scene& s : scenes) frames.push_back(s.tensor);

  OracleConfig cfg;
  cfg.noise_floor = NoiseFloorEstimator::mean;
  cfg.calib_midpoint_db = 14.0;
  const TaskOracleFn base_oracle = make_detection_oracle(cfg);

  ControlParams params;
  params.block_side = 8;
  params.r_max = 64.0;
  params.r_init = 12.0;
  params.bit_width = 4;

  // (a) bounds, (b) call budget, (c) strict lambda ordering of mean ratios
  std::vector<double> mean_ratios;
  for (double lambda : {1.0, 10.0, 100.0}) {
    long calls = 0;
    const TaskOracleFn counting = [&](const RadarTensor& x) {
      ++calls;
      return base_oracle(x);
    };
    ControlParams pl = params;
    pl.lambda = lambda;
    const AdaptTrace trace = run_adaptive(frames, counting, pl);
    long adapted = 0;
    for (const AdaptRecord& rec : trace.records) {
      if (rec.ratio < pl.r_min || rec.ratio > pl.r_max) {
        detail = "ratio out of bounds";
        return false;
      }
      if (!rec.skipped) ++adapted;
    }
    if (calls != static_cast<long>(frames.size()) + adapted) {
      detail = "oracle call budget exceeded";
      return false;
    }
    mean_ratios.push_back(trace.mean_ratio());
  }
  if (!(mean_ratios[0] < mean_ratios[1] && mean_ratios[1] < mean_ratios[2])) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "mean r not increasing: %.3f %.3f %.3f",
                  mean_ratios[0], mean_ratios[1], mean_ratios[2]);
    detail = buf;
    return false;
  }

  // (d) bitwise agreement of the reprune-path and full-re-encode gradients
  // at s = 16, mirroring the controller's update loop
  ControlParams p16 = params;
  p16.bit_width = 16;
  double ratio = p16.r_init;
  int adapted = 0;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const EncodedFrame frame = encode_frame(frames[t], ratio, 16, 8, t);
    const OracleEval eval = base_oracle(decode_frame(frame));
    if (eval.proposals <= 0 || eval.confidence < p16.p_threshold) continue;
    const double probe = std::min(ratio + p16.epsilon, p16.r_max);
    const EncodedFrame repruned = reprune(frame, probe);
    const EncodedFrame full = encode_frame(frames[t], probe, 16, 8, t);
    if (!(repruned == full)) {
      detail = "reprune diverged from full re-encode at frame " + std::to_string(t);
      return false;
    }
    const double p_minus_reprune = base_oracle(decode_frame(repruned)).confidence;
    const double p_minus_full = base_oracle(decode_frame(full)).confidence;
    const double g_reprune =
        proxy_gradient(eval.confidence, p_minus_reprune, p16.epsilon, p16.grad_clip);
    const double g_full =
        proxy_gradient(eval.confidence, p_minus_full, p16.epsilon, p16.grad_clip);
    if (g_reprune != g_full) {
      detail = "gradient mismatch at frame " + std::to_string(t);
      return false;
    }
    ++adapted;
    const double grad_j =
        objective_gradient(-g_reprune, ratio, eval.confidence, p16);
    ratio = std::clamp(ratio + p16.eta * grad_j, p16.r_min, p16.r_max);
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "mean r %.2f < %.2f < %.2f; call budget held; %d bitwise "
                "gradient matches at s=16",
                mean_ratios[0], mean_ratios[1], mean_ratios[2], adapted);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------------------
// 7. Spectral vs index-value ordering and roll-off slopes.
bool baseline_ordering(std::string& detail) {
  const std::vector<int> budgets = {2, 4, 8, 16, 32};
  const int seeds = 20;
  OracleConfig cfg;
  cfg.calib_midpoint_db = 15.0;

  int cells = 0, spectral_wins = 0;
  std::vector<double> f1_spectral(budgets.size(), 0.0);
  std::vector<double> f1_iv(budgets.size(), 0.0);
  for (int seed = 1; seed <= seeds; ++seed) {
    SceneSpec spec;
    spec.channels = 2;
    spec.height = 64;
    spec.width = 64;
    spec.noise_sigma = 1.0;
    spec.seed = seed;
    spec.targets = {{12, 20, 25.0, 0.35}, {35, 44, 18.0, -0.6}, {51, 11, 21.0, 1.1}};
    const Scene scene = generate_scene(spec);
    for (std::size_t i = 0; i < budgets.size(); ++i) {
      const int k = budgets[i];
      const RadarTensor spectral =
          decode_frame(encode_frame(scene.tensor, 64.0 / k, 16, 8));
      const RadarTensor spatial = iv_decode(iv_encode(scene.tensor, 8, k));
      ++cells;
      if (snr_db(scene.tensor, spectral) > snr_db(scene.tensor, spatial)) {
        ++spectral_wins;
      }
      f1_spectral[i] +=
          score(detect(spectral, cfg), scene.truth, 3).f1 / seeds;
      f1_iv[i] += score(detect(spatial, cfg), scene.truth, 3).f1 / seeds;
    }
  }
  const double win_rate = static_cast<double>(spectral_wins) / cells;
  if (win_rate < 0.8) {
    detail = "spectral win rate " + std::to_string(win_rate);
    return false;
  }

  // index-value must shed task performance faster per decade of bit rate
  const double decades = std::log10(static_cast<double>(budgets.back()) / budgets.front());
  const double slope_spectral = (f1_spectral.back() - f1_spectral.front()) / decades;
  const double slope_iv = (f1_iv.back() - f1_iv.front()) / decades;
  if (!(slope_iv > slope_spectral)) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "roll-off slopes: iv %.3f vs spectral %.3f /dec",
                  slope_iv, slope_spectral);
    detail = buf;
    return false;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "spectral wins %.0f%% of %d cells; F1 roll-off %.2f/dec (iv) vs "
                "%.2f/dec (spectral)",
                100.0 * win_rate, cells, slope_iv, slope_spectral);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------------------
// 8. CFAR sanity: detection, false alarms, threshold monotonicity.
bool cfar_sanity(std::string& detail) {
  // 32 real channels tighten the channel-summed power statistics enough that
  // a 10^0.5 threshold never fires on noise. Flags within the point-response
  // support (+-8 bins) are signal cells, not false alarms.
  const int support = 8;
  CfarConfig cfg;  // (9, 3), thd = 10^0.5
  int detections = 0;
  long false_alarms = 0;
  for (int trial = 0; trial < 100; ++trial) {
    SceneSpec spec;
    spec.channels = 16;
    spec.height = 64;
    spec.width = 64;
    spec.noise_sigma = 1.0;
    spec.seed = 40000 + trial;
    spec.targets = {{20 + trial % 24, 18 + trial % 28, 10.0, 0.3}};  // 20 dB
    const Scene scene = generate_scene(spec);
    const auto power = power_map(scene.tensor);
    const auto mask = cfar_detect(power, 64, 64, cfg);
    const Target& t = spec.targets[0];
    if (mask[static_cast<std::size_t>(t.range_bin) * 64 + t.doppler_bin]) {
      ++detections;
    }
    for (int i = 0; i < 64; ++i) {
      for (int j = 0; j < 64; ++j) {
        if (!mask[static_cast<std::size_t>(i) * 64 + j]) continue;
        const int d = std::max(std::abs(i - t.range_bin), std::abs(j - t.doppler_bin));
        if (d > support) ++false_alarms;
      }
    }
  }
  if (detections != 100 || false_alarms != 0) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "detections %d/100, false alarms %ld",
                  detections, false_alarms);
    detail = buf;
    return false;
  }

  // threshold sweep on one fixed noisy scene
  SceneSpec spec;
  spec.channels = 2;
  spec.height = 64;
  spec.width = 64;
  spec.noise_sigma = 1.0;
  spec.seed = 777;
  spec.targets = {{20, 30, 12.0, 0.4}, {45, 50, 9.0, -0.3}};
  const auto power = power_map(generate_scene(spec).tensor);
  std::size_t last = 1u << 31;
  std::vector<std::size_t> counts;
  for (double e : {0.05, 0.2, 0.5}) {
    CfarConfig c;
    c.threshold = std::pow(10.0, e);
    const auto mask = cfar_detect(power, 64, 64, c);
    const std::size_t count =
        static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
    counts.push_back(count);
    if (count > last) {
      detail = "detection count rose with threshold";
      return false;
    }
    last = count;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "100/100 detections, 0 false alarms; thd sweep counts %zu >= %zu >= %zu",
                counts[0], counts[1], counts[2]);
  detail = buf;
  return true;
}

// ---------------------------------------------------------------------------
// 9. Bitstream golden files and corruption errors.
bool bitstream_golden(std::string& detail) {
  const std::filesystem::path dir = ADARADAR_FIXTURE_DIR;
  for (const auto& spec : adaradar::testing::fixture_specs()) {
    const RadarTensor stored = read_rdt(dir / (spec.name + ".rdt"));
    const Scene regenerated = generate_scene(spec.scene);
    if (!(stored == regenerated.tensor)) {
      detail = spec.name + ": generator drifted from committed tensor";
      return false;
    }
    const EncodedFrame frame =
        encode_frame(stored, spec.ratio, spec.bit_width, spec.block_side);
    const std::vector<std::uint8_t> bytes = serialize_frame(frame);

    std::ifstream in(dir / (spec.name + ".arf"), std::ios::binary);
    if (!in) {
      detail = spec.name + ".arf missing";
      return false;
    }
    const std::vector<std::uint8_t> golden((std::istreambuf_iterator<char>(in)),
                                           std::istreambuf_iterator<char>());
    if (bytes != golden) {
      detail = spec.name + ": encoded bytes differ from golden file";
      return false;
    }
  }

  // corruption errors on the M = 2 fixture (its bitmap has padding bits)
  std::ifstream in(dir / "fixture_a.arf", std::ios::binary);
  const std::vector<std::uint8_t> golden((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  auto expect_error = [&](std::vector<std::uint8_t> bytes, const char* what,
                          bool format_error) {
    try {
      deserialize_frame(bytes);
    } catch (const FormatError&) {
      return format_error;
    } catch (const CorruptPayloadError&) {
      return !format_error;
    } catch (...) {
      return false;
    }
    (void)what;
    return false;
  };

  std::vector<std::uint8_t> bad_magic = golden;
  bad_magic[0] = 'X';
  if (!expect_error(bad_magic, "bad magic", true)) {
    detail = "bad magic not rejected as a format error";
    return false;
  }
  std::vector<std::uint8_t> truncated = golden;
  truncated.resize(truncated.size() - 5);
  if (!expect_error(truncated, "truncated", false)) {
    detail = "truncation not rejected as corrupt payload";
    return false;
  }
  std::vector<std::uint8_t> bad_index = golden;
  bad_index[31 + 4] |= 0x01;  // padding bit of record 0's bitmap = index >= M^2
  if (!expect_error(bad_index, "index out of range", false)) {
    detail = "out-of-range index not rejected as corrupt payload";
    return false;
  }
  detail = "3 golden frames byte-exact; magic/truncation/index corruptions rejected";
  return true;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "table reproduction (bit-rate arithmetic)", 1.0, table_reproduction},
      {2, "scale-overhead constant", 1.0, scale_overhead},
      {3, "transform correctness", 30.0, transform_correctness},
      {4, "energy-identity property", 30.0, energy_identity},
      {5, "rate-distortion monotonicity", 60.0, rate_distortion},
      {6, "controller contract", 120.0, controller_contract},
      {7, "baseline ordering", 120.0, baseline_ordering},
      {8, "CFAR sanity", 30.0, cfar_sanity},
      {9, "bitstream golden files", 5.0, bitstream_golden},
  };

  int failures = 0;
  for (Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
      ok = c.body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (elapsed > c.runtime_limit_s) {
      ok = false;
      detail += " [runtime " + std::to_string(elapsed) + "s over limit]";
    }
    std::printf("[%s] criterion %d: %s (%.2fs) - %s\n", ok ? "PASS" : "FAIL",
                c.number, c.name.c_str(), elapsed, detail.c_str());
    if (!ok) ++failures;
  }
  return failures;
}
