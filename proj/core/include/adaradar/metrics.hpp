#ifndef ADARADAR_METRICS_HPP
#define ADARADAR_METRICS_HPP

#include <string>

#include "adaradar/codec.hpp"
#include "adaradar/tensor.hpp"

namespace adaradar {

// 10 log10(signal energy / error energy) over the full real tensor, 64-bit
// accumulation; +inf when the reconstruction is exact.
double snr_db(const RadarTensor& x, const RadarTensor& reconstructed);

struct Rae {
  double mean = 0.0;
  double max = 0.0;
};

// Relative absolute error between the channel-summed power spectra of the two
// tensors; pixels with original power below 1e-12 are excluded. Throws when
// every pixel is excluded.
Rae rae(const RadarTensor& x, const RadarTensor& reconstructed);

// Codec-side stage times for the latency model, seconds.
struct CodecTimes {
  double dct = 0.0;
  double threshold = 0.0;
  double quantize = 0.0;
  double dequantize = 0.0;
  double idct = 0.0;
};

// t = t_dct + t_thd + t_q + bits/bandwidth + t_dq + t_idct.
double link_latency(double bits, double bandwidth_bps, const CodecTimes& times = {});

struct FidelityReport {
  double snr_db = 0.0;
  double rae_mean = 0.0;
  double rae_max = 0.0;
  double value_bpp = 0.0;
  double nominal_bpp = 0.0;
  double wire_bpp = 0.0;
  double compression_ratio = 0.0;
  double effective_ratio = 0.0;
};

FidelityReport fidelity_report(const RadarTensor& x, const RadarTensor& reconstructed,
                               const EncodedFrame& frame);

std::string report_to_json(const FidelityReport& report);

}  // namespace adaradar

#endif  // ADARADAR_METRICS_HPP
