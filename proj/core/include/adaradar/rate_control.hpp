#ifndef ADARADAR_RATE_CONTROL_HPP
#define ADARADAR_RATE_CONTROL_HPP

#include <filesystem>
#include <span>
#include <vector>

#include "adaradar/oracle.hpp"
#include "adaradar/tensor.hpp"

namespace adaradar {

enum class ObjectiveKind {
  penalized,        // grad J = grad_h - lambda * B'(r)
  constraint_aware  // grad J = (p - p_min) + grad_h * (r - r_min + lambda)
};

struct ControlParams {
  double r_init = 12.0;
  double r_min = 1.0;
  double r_max = 4096.0;  // M^2 for the default block side
  double eta = 1.0;       // step size
  double epsilon = 0.05;  // perturbation in ratio units
  double lambda = 1.0;    // bandwidth penalty weight
  double p_threshold = 0.8;  // confidence gate: skip adaptation below this
  double p_min = 0.8;        // confidence floor of the constraint-aware form
  double grad_clip = 1.0;    // symmetric bound on the proxy gradient
  ObjectiveKind objective = ObjectiveKind::penalized;
  int bit_width = 4;   // s in the bit-rate model B(r) = s / r
  int block_side = 64;

  void validate() const;
};

struct RateState {
  double ratio = 1.0;
  long frame_index = 0;
  double last_confidence = 0.0;
  double last_gradient = 0.0;
};

struct AdaptRecord {
  long t = 0;
  double ratio = 0.0;      // r_t used for this frame
  double value_bpp = 0.0;  // measured from the transmitted frame
  double p = 0.0;
  double p_minus = 0.0;    // NaN on skipped frames
  double g_hat = 0.0;      // clipped proxy gradient (p - p_minus) / epsilon
  double grad_j = 0.0;
  bool skipped = false;
};

struct AdaptTrace {
  std::vector<AdaptRecord> records;

  double mean_ratio() const;
  double mean_value_bpp() const;
};

// Instantaneous bit-rate model B(r) = s / r (the published BR convention) and
// its derivative B'(r) = -s / r^2. r must lie in [r_min, r_max].
double bpp_of(double ratio, const ControlParams& params);
double bpp_derivative(double ratio, const ControlParams& params);

// Zeroth-order estimate (p - p_perturbed) / epsilon where p_perturbed comes
// from the more-pruned probe at r + epsilon; clipped to [-grad_clip, +grad_clip].
// Positive when extra pruning hurts confidence.
double proxy_gradient(double p, double p_perturbed, double epsilon,
                      double grad_clip);

// Ascent gradient of the objective. `confidence_slope` is the estimated
// derivative of confidence with respect to the ratio (the negated proxy
// gradient), so the bandwidth term pushes the ratio up while confidence
// sensitivity pulls it down.
double objective_gradient(double confidence_slope, double ratio, double p,
                          const ControlParams& params);

// r <- clamp(r + eta * grad_j, r_min, r_max).
RateState step(const RateState& state, double grad_j, const ControlParams& params);

// The closed loop: encode at r_t, decode, query the oracle; unless gated,
// reprune the same frame to r_t + epsilon, decode, query again, then update.
// Exactly two oracle calls per adapted frame, one per skipped frame.
AdaptTrace run_adaptive(std::span<const RadarTensor> frames,
                        const TaskOracleFn& oracle, const ControlParams& params);

// Trace CSV: t,r,value_bpp,p,p_minus,g_hat,grad_J,skipped
void write_trace_csv(const AdaptTrace& trace, const std::filesystem::path& path);

}  // namespace adaradar

#endif  // ADARADAR_RATE_CONTROL_HPP
