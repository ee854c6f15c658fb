#include "adaradar/rate_control.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "adaradar/codec.hpp"
#include "adaradar/errors.hpp"

namespace adaradar {

namespace {

void check_ratio_in_bounds(double ratio, const ControlParams& params) {
  if (!(ratio >= params.r_min) || !(ratio <= params.r_max)) {
    std::ostringstream msg;
    msg << "ratio " << ratio << " outside [" << params.r_min << ", " << params.r_max
        << "]";
    throw InvalidArgument(msg.str());
  }
}

}  // namespace

void ControlParams::validate() const {
  const double block_len = static_cast<double>(block_side) * block_side;
  if (!(r_min >= 1.0)) throw InvalidArgument("r_min must be >= 1");
  if (!(r_max <= block_len)) throw InvalidArgument("r_max must be <= M^2");
  if (!(r_min <= r_max)) throw InvalidArgument("r_min must be <= r_max");
  if (!(r_init >= r_min && r_init <= r_max)) {
    throw InvalidArgument("r_init must lie in [r_min, r_max]");
  }
  if (!(eta > 0.0)) throw InvalidArgument("eta must be > 0");
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
  if (!(grad_clip > 0.0)) throw InvalidArgument("grad_clip must be > 0");
  if (p_threshold < 0.0 || p_threshold > 1.0 || p_min < 0.0 || p_min > 1.0) {
    throw InvalidArgument("confidence bounds must lie in [0, 1]");
  }
  if (bit_width < 2 || bit_width > 16) throw InvalidArgument("bit width outside [2, 16]");
  if (block_side <= 0) throw InvalidArgument("block side must be positive");
}

double AdaptTrace::mean_ratio() const {
  double acc = 0.0;
  for (const AdaptRecord& r : records) acc += r.ratio;
  return records.empty() ? 0.0 : acc / static_cast<double>(records.size());
}

double AdaptTrace::mean_value_bpp() const {
  double acc = 0.0;
  for (const AdaptRecord& r : records) acc += r.value_bpp;
  return records.empty() ? 0.0 : acc / static_cast<double>(records.size());
}

double bpp_of(double ratio, const ControlParams& params) {
  check_ratio_in_bounds(ratio, params);
  return static_cast<double>(params.bit_width) / ratio;
}

double bpp_derivative(double ratio, const ControlParams& params) {
  check_ratio_in_bounds(ratio, params);
  return -static_cast<double>(params.bit_width) / (ratio * ratio);
}

double proxy_gradient(double p, double p_perturbed, double epsilon,
                      double grad_clip) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
  const double raw = (p - p_perturbed) / epsilon;
  return std::clamp(raw, -grad_clip, grad_clip);
}

double objective_gradient(double confidence_slope, double ratio, double p,
                          const ControlParams& params) {
  if (params.objective == ObjectiveKind::penalized) {
    return confidence_slope - params.lambda * bpp_derivative(ratio, params);
  }
  return (p - params.p_min) +
         confidence_slope * (ratio - params.r_min + params.lambda);
}

RateState step(const RateState& state, double grad_j, const ControlParams& params) {
  RateState next = state;
  next.ratio = std::clamp(state.ratio + params.eta * grad_j, params.r_min, params.r_max);
  next.frame_index = state.frame_index + 1;
  next.last_gradient = grad_j;
  return next;
}

AdaptTrace run_adaptive(std::span<const RadarTensor> frames,
                        const TaskOracleFn& oracle, const ControlParams& params) {
  params.validate();
  if (frames.empty()) throw InvalidArgument("run_adaptive needs at least one frame");

  AdaptTrace trace;
  trace.records.reserve(frames.size());
  RateState state;
  state.ratio = std::clamp(params.r_init, params.r_min, params.r_max);

  for (std::size_t t = 0; t < frames.size(); ++t) {
    AdaptRecord rec;
    rec.t = static_cast<long>(t);
    rec.ratio = state.ratio;
    try {
      const EncodedFrame frame = encode_frame(frames[t], state.ratio,
                                              params.bit_width, params.block_side,
                                              static_cast<std::uint64_t>(t));
      rec.value_bpp = bit_rate(frame).value_bpp;
      const RadarTensor decoded = decode_frame(frame);
      const OracleEval eval = oracle(decoded);
      rec.p = eval.confidence;

      if (eval.proposals <= 0 || eval.confidence < params.p_threshold) {
        rec.skipped = true;
        rec.p_minus = std::numeric_limits<double>::quiet_NaN();
        state.frame_index = static_cast<long>(t) + 1;
      } else {
        // Perturb toward more pruning on the already-quantized frame; the
        // probe clamps at r_max, where the estimate degenerates to zero.
        const double probe = std::min(state.ratio + params.epsilon, params.r_max);
        const EncodedFrame perturbed = reprune(frame, probe);
        const OracleEval eval_minus = oracle(decode_frame(perturbed));
        rec.p_minus = eval_minus.confidence;
        rec.g_hat = proxy_gradient(rec.p, rec.p_minus, params.epsilon,
                                   params.grad_clip);
        rec.grad_j = objective_gradient(-rec.g_hat, state.ratio, rec.p, params);
        state = step(state, rec.grad_j, params);
      }
      state.last_confidence = rec.p;
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "adaptive run failed at frame " << t << ": " << e.what();
      throw Error(msg.str());
    }
    trace.records.push_back(rec);
  }
  return trace;
}

void write_trace_csv(const AdaptTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "t,r,value_bpp,p,p_minus,g_hat,grad_J,skipped\n";
  out.precision(9);
  for (const AdaptRecord& r : trace.records) {
    out << r.t << ',' << r.ratio << ',' << r.value_bpp << ',' << r.p << ',';
    if (std::isnan(r.p_minus)) {
      out << "";
    } else {
      out << r.p_minus;
    }
    out << ',' << r.g_hat << ',' << r.grad_j << ',' << (r.skipped ? 1 : 0) << '\n';
  }
  if (!out) throw Error("trace CSV write failed");
}

}  // namespace adaradar
