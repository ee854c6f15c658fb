#include "adaradar/metrics.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "adaradar/errors.hpp"
#include "adaradar/oracle.hpp"

namespace adaradar {

namespace {

void check_same_shape(const RadarTensor& a, const RadarTensor& b) {
  if (a.channels != b.channels || a.height != b.height || a.width != b.width) {
    throw DimensionError("tensor shapes differ");
  }
}

}  // namespace

double snr_db(const RadarTensor& x, const RadarTensor& reconstructed) {
  check_same_shape(x, reconstructed);
  double signal = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    const double v = x.data[i];
    const double e = static_cast<double>(x.data[i]) - reconstructed.data[i];
    signal += v * v;
    error += e * e;
  }
  if (error == 0.0) return std::numeric_limits<double>::infinity();
  if (signal == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / error);
}

Rae rae(const RadarTensor& x, const RadarTensor& reconstructed) {
  check_same_shape(x, reconstructed);
  const std::vector<double> p = power_map(x);
  const std::vector<double> q = power_map(reconstructed);

  Rae out;
  std::size_t included = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (std::fabs(p[i]) < 1e-12) continue;
    const double err = std::fabs(p[i] - q[i]) / std::fabs(p[i]);
    out.mean += err;
    out.max = std::max(out.max, err);
    ++included;
  }
  if (included == 0) throw InvalidArgument("RAE: every pixel below the power floor");
  out.mean /= static_cast<double>(included);
  return out;
}

double link_latency(double bits, double bandwidth_bps, const CodecTimes& times) {
  if (!(bandwidth_bps > 0.0)) throw InvalidArgument("bandwidth must be > 0");
  return times.dct + times.threshold + times.quantize + bits / bandwidth_bps +
         times.dequantize + times.idct;
}

FidelityReport fidelity_report(const RadarTensor& x, const RadarTensor& reconstructed,
                               const EncodedFrame& frame) {
  const BitRate rate = bit_rate(frame);
  FidelityReport report;
  report.snr_db = snr_db(x, reconstructed);
  const Rae r = rae(x, reconstructed);
  report.rae_mean = r.mean;
  report.rae_max = r.max;
  report.value_bpp = rate.value_bpp;
  report.nominal_bpp = rate.nominal_bpp;
  report.wire_bpp = rate.wire_bpp;
  report.compression_ratio = rate.compression_ratio;
  report.effective_ratio = rate.effective_ratio;
  return report;
}

std::string report_to_json(const FidelityReport& report) {
  nlohmann::json j = {{"snr_db", report.snr_db},
                      {"rae_mean", report.rae_mean},
                      {"rae_max", report.rae_max},
                      {"value_bpp", report.value_bpp},
                      {"nominal_bpp", report.nominal_bpp},
                      {"wire_bpp", report.wire_bpp},
                      {"compression_ratio", report.compression_ratio},
                      {"effective_ratio", report.effective_ratio}};
  return j.dump(2);
}

}  // namespace adaradar
