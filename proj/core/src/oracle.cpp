#include "adaradar/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adaradar/errors.hpp"

namespace adaradar {

namespace {

constexpr double kFloorEpsilon = 1e-30;  // keeps noiseless maps out of 0/0

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double noise_floor(std::span<const double> power, NoiseFloorEstimator kind) {
  if (kind == NoiseFloorEstimator::mean) {
    double acc = 0.0;
    for (double p : power) acc += p;
    return std::max(acc / static_cast<double>(power.size()), kFloorEpsilon);
  }
  std::vector<double> copy(power.begin(), power.end());
  const std::size_t mid = copy.size() / 2;
  std::nth_element(copy.begin(), copy.begin() + mid, copy.end());
  return std::max(copy[mid], kFloorEpsilon);
}

// -3 dB span around a peak along one axis.
int half_power_extent(const std::vector<double>& power, int h, int w, int pi,
                      int pj, bool along_range) {
  const double half = power[static_cast<std::size_t>(pi) * w + pj] * 0.5;
  int extent = 1;
  for (int dir : {-1, 1}) {
    int i = pi, j = pj;
    for (;;) {
      if (along_range) i += dir; else j += dir;
      if (i < 0 || i >= h || j < 0 || j >= w) break;
      if (power[static_cast<std::size_t>(i) * w + j] < half) break;
      ++extent;
    }
  }
  return extent;
}

}  // namespace

void OracleConfig::validate() const {
  if (nms_radius < 1) throw InvalidArgument("nms_radius must be >= 1");
  if (!(calib_slope_db > 0.0)) throw InvalidArgument("calibration slope must be > 0");
}

std::vector<double> power_map(const RadarTensor& x) {
  std::vector<double> power(static_cast<std::size_t>(x.height) * x.width, 0.0);
  for (int c = 0; c < x.channels; ++c) {
    const float* plane =
        x.data.data() + static_cast<std::size_t>(c) * x.height * x.width;
    for (std::size_t p = 0; p < power.size(); ++p) {
      power[p] += static_cast<double>(plane[p]) * plane[p];
    }
  }
  return power;
}

std::vector<Proposal> detect(const RadarTensor& x, const OracleConfig& cfg) {
  cfg.validate();
  x.validate();
  const int h = x.height;
  const int w = x.width;
  const std::vector<double> power = power_map(x);
  const double floor = noise_floor(power, cfg.noise_floor);

  // Candidates: calibrated confidence above threshold at a 3x3 local maximum.
  std::vector<Proposal> candidates;
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const double p = power[static_cast<std::size_t>(i) * w + j];
      if (p <= 0.0) continue;
      const double snr_db = 10.0 * std::log10(p / floor);
      const double conf =
          logistic((snr_db - cfg.calib_midpoint_db) / cfg.calib_slope_db);
      if (conf < cfg.detection_threshold) continue;
      bool is_peak = true;
      for (int di = -1; di <= 1 && is_peak; ++di) {
        for (int dj = -1; dj <= 1 && is_peak; ++dj) {
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || ii >= h || jj < 0 || jj >= w) continue;
          if (power[static_cast<std::size_t>(ii) * w + jj] > p) is_peak = false;
        }
      }
      if (!is_peak) continue;
      Proposal prop;
      prop.range_bin = i;
      prop.doppler_bin = j;
      prop.confidence = conf;
      candidates.push_back(prop);
    }
  }

  std::sort(candidates.begin(), candidates.end(), [](const Proposal& a, const Proposal& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.range_bin != b.range_bin) return a.range_bin < b.range_bin;
    return a.doppler_bin < b.doppler_bin;
  });

  // Greedy NMS, Chebyshev distance.
  std::vector<Proposal> kept;
  for (const Proposal& c : candidates) {
    bool suppressed = false;
    for (const Proposal& k : kept) {
      const int d = std::max(std::abs(c.range_bin - k.range_bin),
                             std::abs(c.doppler_bin - k.doppler_bin));
      if (d <= cfg.nms_radius) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(c);
  }

  for (Proposal& p : kept) {
    p.extent_range = half_power_extent(power, h, w, p.range_bin, p.doppler_bin, true);
    p.extent_doppler = half_power_extent(power, h, w, p.range_bin, p.doppler_bin, false);
  }
  return kept;
}

double confidence(std::span<const Proposal> proposals) {
  double best = 0.0;
  for (const Proposal& p : proposals) best = std::max(best, p.confidence);
  return best;
}

double seg_entropy(std::span<const double> prob_map, int num_classes, int height,
                   int width) {
  if (num_classes <= 0 || height <= 0 || width <= 0) {
    throw InvalidArgument("seg map dims must be positive");
  }
  const std::size_t pixels = static_cast<std::size_t>(height) * width;
  if (prob_map.size() != pixels * static_cast<std::size_t>(num_classes)) {
    throw DimensionError("seg map length does not match dims");
  }
  double total = 0.0;
  for (std::size_t p = 0; p < pixels; ++p) {
    double sum = 0.0;
    double entropy = 0.0;
    for (int c = 0; c < num_classes; ++c) {
      const double v = prob_map[static_cast<std::size_t>(c) * pixels + p];
      if (v < -1e-12) throw InvalidArgument("seg map has negative probability");
      sum += v;
      if (v > 0.0) entropy -= v * std::log(v);
    }
    if (std::fabs(sum - 1.0) > 1e-6) {
      throw InvalidArgument("seg map pixel distribution does not sum to 1");
    }
    total += entropy;
  }
  return total / static_cast<double>(pixels);
}

double seg_confidence(double mean_entropy, int num_classes) {
  if (num_classes <= 1) return 1.0;
  return 1.0 - mean_entropy / std::log(static_cast<double>(num_classes));
}

Score score(std::span<const Proposal> proposals, std::span<const Target> truth,
            int match_radius) {
  if (match_radius < 0) throw InvalidArgument("match radius must be >= 0");
  std::vector<Proposal> ordered(proposals.begin(), proposals.end());
  std::sort(ordered.begin(), ordered.end(), [](const Proposal& a, const Proposal& b) {
    return a.confidence > b.confidence;
  });

  std::vector<bool> used(truth.size(), false);
  int tp = 0;
  for (const Proposal& p : ordered) {
    int best = -1;
    int best_dist = match_radius + 1;
    for (std::size_t t = 0; t < truth.size(); ++t) {
      if (used[t]) continue;
      const int d = std::max(std::abs(p.range_bin - truth[t].range_bin),
                             std::abs(p.doppler_bin - truth[t].doppler_bin));
      if (d < best_dist) {
        best_dist = d;
        best = static_cast<int>(t);
      }
    }
    if (best >= 0) {
      used[best] = true;
      ++tp;
    }
  }

  Score s;
  s.precision = proposals.empty() ? 1.0 : static_cast<double>(tp) / proposals.size();
  s.recall = truth.empty() ? 1.0 : static_cast<double>(tp) / truth.size();
  s.f1 = (s.precision + s.recall) > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

TaskOracleFn make_detection_oracle(const OracleConfig& cfg) {
  cfg.validate();
  return [cfg](const RadarTensor& x) {
    const auto proposals = detect(x, cfg);
    return OracleEval{confidence(proposals), static_cast<int>(proposals.size())};
  };
}

TaskOracleFn make_entropy_oracle(const OracleConfig& cfg) {
  cfg.validate();
  return [cfg](const RadarTensor& x) {
    const std::vector<double> power = power_map(x);
    const double floor = noise_floor(power, cfg.noise_floor);
    double total_entropy = 0.0;
    for (double p : power) {
      double conf = 0.0;
      if (p > 0.0) {
        const double snr_db = 10.0 * std::log10(p / floor);
        conf = logistic((snr_db - cfg.calib_midpoint_db) / cfg.calib_slope_db);
      }
      for (double v : {conf, 1.0 - conf}) {
        if (v > 0.0) total_entropy -= v * std::log(v);
      }
    }
    const double mean_entropy = total_entropy / static_cast<double>(power.size());
    return OracleEval{seg_confidence(mean_entropy, 2), 1};
  };
}

}  // namespace adaradar
