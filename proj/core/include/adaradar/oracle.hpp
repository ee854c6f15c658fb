#ifndef ADARADAR_ORACLE_HPP
#define ADARADAR_ORACLE_HPP

#include <functional>
#include <span>
#include <vector>

#include "adaradar/tensor.hpp"

namespace adaradar {

// One detection from the task oracle.
struct Proposal {
  int range_bin = 0;
  int doppler_bin = 0;
  int extent_range = 1;    // -3 dB span in range bins
  int extent_doppler = 1;  // -3 dB span in Doppler bins
  double confidence = 0.0;
};

enum class NoiseFloorEstimator { median, mean };

struct OracleConfig {
  double detection_threshold = 0.5;  // pre-NMS confidence floor
  int nms_radius = 5;                // Chebyshev suppression radius, bins
  double calib_midpoint_db = 10.0;   // logistic midpoint over peak SNR
  double calib_slope_db = 3.0;       // logistic slope, dB per unit
  NoiseFloorEstimator noise_floor = NoiseFloorEstimator::median;

  void validate() const;
};

// Channel-summed per-pixel power, H*W row-major, double accumulation.
std::vector<double> power_map(const RadarTensor& x);

// Matched-filter style peak detector: power map, robust noise floor, logistic
// confidence over peak SNR in dB, 3x3 local maxima, greedy NMS. Proposals come
// back sorted by confidence descending (ties by position).
std::vector<Proposal> detect(const RadarTensor& x, const OracleConfig& cfg);

// max_k p_k; 0 for an empty list.
double confidence(std::span<const Proposal> proposals);

// Mean Shannon entropy (natural log) of a per-pixel class distribution map,
// class-major layout [num_classes][height][width]. Throws InvalidArgument if
// any pixel's distribution is off by more than 1e-6.
double seg_entropy(std::span<const double> prob_map, int num_classes, int height,
                   int width);

// Entropy surrogate confidence: 1 - H / ln(num_classes).
double seg_confidence(double mean_entropy, int num_classes);

struct Score {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Greedy one-to-one matching (confidence order, Chebyshev distance) at a
// single radius. With zero proposals precision is reported as 1 by convention.
Score score(std::span<const Proposal> proposals, std::span<const Target> truth,
            int match_radius);

// Adapter interface for the rate controller: surrogate confidence plus the
// proposal count that drives the skip guard.
struct OracleEval {
  double confidence = 0.0;
  int proposals = 0;
};

using TaskOracleFn = std::function<OracleEval(const RadarTensor&)>;

// Detection-confidence oracle: p = max proposal confidence.
TaskOracleFn make_detection_oracle(const OracleConfig& cfg);

// Segmentation surrogate: 2-class per-pixel distribution from the calibrated
// confidence map, p = 1 - mean entropy / ln 2. Always reports one proposal so
// the skip guard falls through to the confidence threshold.
TaskOracleFn make_entropy_oracle(const OracleConfig& cfg);

}  // namespace adaradar

#endif  // ADARADAR_ORACLE_HPP
