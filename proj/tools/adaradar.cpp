// adaradar: spectral radar-tensor compression toolkit.
//
// Subcommands: gen, encode, decode, reprune, detect, adapt, report,
// baseline iv/cfar, sweep, plot.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adaradar/baselines.hpp"
#include "adaradar/codec.hpp"
#include "adaradar/errors.hpp"
#include "adaradar/metrics.hpp"
#include "adaradar/oracle.hpp"
#include "adaradar/plot.hpp"
#include "adaradar/rate_control.hpp"
#include "adaradar/sweep.hpp"
#include "adaradar/tensor.hpp"

namespace {

using namespace adaradar;

// "r,d,amplitude,phase_slope[;r,d,amplitude,phase_slope...]"
std::vector<Target> parse_targets(const std::string& text) {
  std::vector<Target> targets;
  std::stringstream stream(text);
  std::string tuple;
  while (std::getline(stream, tuple, ';')) {
    if (tuple.empty()) continue;
    Target t;
    char extra;
    const int got = std::sscanf(tuple.c_str(), "%d ,%d ,%lf ,%lf %c", &t.range_bin,
                                &t.doppler_bin, &t.amplitude,
                                &t.channel_phase_slope, &extra);
    if (got != 4) {
      throw InvalidArgument("bad target tuple '" + tuple +
                            "' (want r,d,amplitude,phase_slope)");
    }
    targets.push_back(t);
  }
  return targets;
}

std::vector<RadarTensor> load_frames(const std::string& path) {
  if (path.ends_with(".rdtseq")) return read_rdt_sequence(path);
  std::vector<RadarTensor> one;
  one.push_back(read_rdt(path));
  return one;
}

int run(int argc, char** argv) {
  CLI::App app{"adaradar: rate-adaptive spectral compression for radar tensors"};
  app.require_subcommand(1);

  // ---- gen ----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a synthetic scene or sequence");
  std::string gen_targets;
  std::string gen_dims = "2,64,64";
  std::string gen_out;
  SceneSpec gen_spec;
  SequenceSpec gen_seq;
  int gen_frames = 1;
  gen->add_option("--targets", gen_targets, "r,d,amp,slope tuples separated by ';'");
  gen->add_option("--noise", gen_spec.noise_sigma, "per-sample noise sigma");
  gen->add_option("--seed", gen_spec.seed, "random seed");
  gen->add_option("--dims", gen_dims, "C,H,W (complex channels, range, Doppler)");
  gen->add_option("--fringe", gen_spec.fringe_scale, "fringe scale (0 = baseband)");
  gen->add_option("--frames", gen_frames, "emit a .rdtseq with this many frames");
  gen->add_option("--range-rate", gen_seq.range_rate, "target drift, bins/frame");
  gen->add_option("--doppler-rate", gen_seq.doppler_rate, "target drift, bins/frame");
  gen->add_option("--wobble", gen_seq.amplitude_wobble, "amplitude modulation depth");
  gen->add_option("-o,--output", gen_out, "output .rdt or .rdtseq")->required();
  gen->callback([&]() {
    int c = 2, h = 64, w = 64;
    if (std::sscanf(gen_dims.c_str(), "%d ,%d ,%d", &c, &h, &w) != 3) {
      throw InvalidArgument("bad --dims (want C,H,W)");
    }
    gen_spec.channels = c;
    gen_spec.height = h;
    gen_spec.width = w;
    gen_spec.targets = parse_targets(gen_targets);
    if (gen_frames <= 1) {
      write_rdt(generate_scene(gen_spec).tensor, gen_out);
    } else {
      gen_seq.scene = gen_spec;
      gen_seq.frames = gen_frames;
      std::vector<RadarTensor> frames;
      for (Scene& s : generate_sequence(gen_seq)) frames.push_back(std::move(s.tensor));
      write_rdt_sequence(frames, gen_out);
    }
    std::cout << "wrote " << gen_out << "\n";
  });

  // ---- encode ---------------------------------------------------------------
  auto* encode = app.add_subcommand("encode", "compress a tensor into an ARF frame");
  std::string enc_in, enc_out;
  double enc_ratio = 12.0;
  int enc_bits = 4, enc_side = 64;
  encode->add_option("-i,--input", enc_in, "input .rdt")->required();
  encode->add_option("-r,--ratio", enc_ratio, "pruning ratio in [1, M^2]");
  encode->add_option("-s,--bits", enc_bits, "quantizer bit width [2,16]");
  encode->add_option("-M,--block", enc_side, "block side");
  encode->add_option("-o,--output", enc_out, "output .arf")->required();
  encode->callback([&]() {
    const RadarTensor x = read_rdt(enc_in);
    const EncodedFrame frame = encode_frame(x, enc_ratio, enc_bits, enc_side);
    write_arf(frame, enc_out);
    const BitRate rate = bit_rate(frame);
    std::printf("wrote %s  value_bpp=%.4f  wire_bpp=%.4f  CR=%.1fx\n",
                enc_out.c_str(), rate.value_bpp, rate.wire_bpp,
                rate.compression_ratio);
  });

  // ---- decode ---------------------------------------------------------------
  auto* decode = app.add_subcommand("decode", "reconstruct a tensor from an ARF frame");
  std::string dec_in, dec_out;
  decode->add_option("-i,--input", dec_in, "input .arf")->required();
  decode->add_option("-o,--output", dec_out, "output .rdt")->required();
  decode->callback([&]() {
    write_rdt(decode_frame(read_arf(dec_in)), dec_out);
    std::cout << "wrote " << dec_out << "\n";
  });

  // ---- reprune ----------------------------------------------------------------
  auto* rep = app.add_subcommand("reprune", "drop coefficients to a larger ratio");
  std::string rep_in, rep_out;
  double rep_ratio = 0.0;
  rep->add_option("-i,--input", rep_in, "input .arf")->required();
  rep->add_option("-r,--ratio", rep_ratio, "new (larger) ratio")->required();
  rep->add_option("-o,--output", rep_out, "output .arf")->required();
  rep->callback([&]() {
    write_arf(reprune(read_arf(rep_in), rep_ratio), rep_out);
    std::cout << "wrote " << rep_out << "\n";
  });

  // ---- detect ---------------------------------------------------------------
  auto* det = app.add_subcommand("detect", "run the peak detector on a tensor");
  std::string det_in, det_out;
  OracleConfig det_cfg;
  std::string det_floor = "median";
  det->add_option("-i,--input", det_in, "input .rdt")->required();
  det->add_option("--thresh", det_cfg.detection_threshold, "confidence threshold");
  det->add_option("--nms", det_cfg.nms_radius, "NMS radius, bins");
  det->add_option("--midpoint", det_cfg.calib_midpoint_db, "calibration midpoint dB");
  det->add_option("--slope", det_cfg.calib_slope_db, "calibration slope dB");
  det->add_option("--floor", det_floor, "noise floor estimator: median|mean");
  det->add_option("-o,--output", det_out, "output proposals CSV")->required();
  det->callback([&]() {
    if (det_floor == "mean") det_cfg.noise_floor = NoiseFloorEstimator::mean;
    const auto proposals = detect(read_rdt(det_in), det_cfg);
    std::ofstream out(det_out);
    if (!out) throw Error("cannot open " + det_out);
    out << "range_bin,doppler_bin,extent_range,extent_doppler,confidence\n";
    out.precision(9);
    for (const Proposal& p : proposals) {
      out << p.range_bin << ',' << p.doppler_bin << ',' << p.extent_range << ','
          << p.extent_doppler << ',' << p.confidence << '\n';
    }
    std::printf("%zu proposals -> %s\n", proposals.size(), det_out.c_str());
  });

  // ---- adapt ----------------------------------------------------------------
  auto* adapt = app.add_subcommand("adapt", "closed-loop rate control over a sequence");
  std::string adapt_in, adapt_out, adapt_objective = "penalized";
  std::string adapt_oracle = "detect", adapt_floor = "median";
  ControlParams params;
  params.block_side = 8;
  params.r_max = 64.0;
  OracleConfig adapt_cfg;
  adapt->add_option("-i,--input", adapt_in, "input .rdtseq")->required();
  adapt->add_option("--objective", adapt_objective, "penalized|eqS5");
  adapt->add_option("--lambda", params.lambda, "bandwidth penalty weight");
  adapt->add_option("--eta", params.eta, "step size");
  adapt->add_option("--eps", params.epsilon, "perturbation");
  adapt->add_option("--r-init", params.r_init, "initial pruning ratio");
  adapt->add_option("--r-min", params.r_min, "ratio lower bound");
  adapt->add_option("--r-max", params.r_max, "ratio upper bound");
  adapt->add_option("--p-thresh", params.p_threshold, "confidence gate");
  adapt->add_option("--p-min", params.p_min, "confidence floor (eqS5)");
  adapt->add_option("--clip", params.grad_clip, "gradient clip");
  adapt->add_option("-s,--bits", params.bit_width, "quantizer bit width");
  adapt->add_option("-M,--block", params.block_side, "block side");
  adapt->add_option("--oracle", adapt_oracle, "task oracle: detect|entropy");
  adapt->add_option("--midpoint", adapt_cfg.calib_midpoint_db, "oracle midpoint dB");
  adapt->add_option("--slope", adapt_cfg.calib_slope_db, "oracle slope dB");
  adapt->add_option("--floor", adapt_floor, "noise floor estimator: median|mean");
  adapt->add_option("-o,--output", adapt_out, "trace CSV")->required();
  adapt->callback([&]() {
    if (adapt_objective == "eqS5") {
      params.objective = ObjectiveKind::constraint_aware;
    } else if (adapt_objective != "penalized") {
      throw InvalidArgument("unknown objective " + adapt_objective);
    }
    if (adapt_floor == "mean") adapt_cfg.noise_floor = NoiseFloorEstimator::mean;
    const auto frames = load_frames(adapt_in);
    const TaskOracleFn oracle = (adapt_oracle == "entropy")
                                    ? make_entropy_oracle(adapt_cfg)
                                    : make_detection_oracle(adapt_cfg);
    const AdaptTrace trace = run_adaptive(frames, oracle, params);
    write_trace_csv(trace, adapt_out);
    std::printf("%zu frames  mean_r=%.3f  mean_bpp=%.4f -> %s\n",
                trace.records.size(), trace.mean_ratio(), trace.mean_value_bpp(),
                adapt_out.c_str());
  });

  // ---- report ---------------------------------------------------------------
  auto* report = app.add_subcommand("report", "fidelity metrics for a reconstruction");
  std::string rep_a, rep_b, rep_frame, rep_json;
  report->add_option("-a,--original", rep_a, "original .rdt")->required();
  report->add_option("-b,--reconstructed", rep_b, "reconstructed .rdt")->required();
  report->add_option("--frame", rep_frame, "the .arf the reconstruction came from")
      ->required();
  report->add_option("-o,--output", rep_json, "output JSON")->required();
  report->callback([&]() {
    const FidelityReport r =
        fidelity_report(read_rdt(rep_a), read_rdt(rep_b), read_arf(rep_frame));
    std::ofstream out(rep_json);
    if (!out) throw Error("cannot open " + rep_json);
    out << report_to_json(r) << "\n";
    std::printf("snr=%.2f dB  value_bpp=%.4f  CR=%.1fx -> %s\n", r.snr_db,
                r.value_bpp, r.compression_ratio, rep_json.c_str());
  });

  // ---- baseline ---------------------------------------------------------------
  auto* baseline = app.add_subcommand("baseline", "index-value and CFAR compressors");
  baseline->require_subcommand(1);

  auto* iv = baseline->add_subcommand("iv", "spatial top-K index-value codec");
  std::string iv_mode = "encode", iv_in, iv_out;
  int iv_side = 8, iv_keep = 8;
  iv->add_option("mode", iv_mode, "encode|decode")->required();
  iv->add_option("-i,--input", iv_in, "input")->required();
  iv->add_option("-M,--block", iv_side, "block side");
  iv->add_option("-K,--keep", iv_keep, "kept samples per block");
  iv->add_option("-o,--output", iv_out, "output")->required();
  iv->callback([&]() {
    if (iv_mode == "encode") {
      const IndexValueFrame f = iv_encode(read_rdt(iv_in), iv_side, iv_keep);
      write_aiv(f, iv_out);
      std::printf("wrote %s  value_bpp=%.4f\n", iv_out.c_str(), f.value_bpp());
    } else if (iv_mode == "decode") {
      write_rdt(iv_decode(read_aiv(iv_in)), iv_out);
      std::cout << "wrote " << iv_out << "\n";
    } else {
      throw InvalidArgument("mode must be encode or decode");
    }
  });

  auto* cf = baseline->add_subcommand("cfar", "CA-CFAR peak-retention codec");
  std::string cf_mode = "encode", cf_in, cf_out;
  CfarConfig cf_cfg;
  cf->add_option("mode", cf_mode, "encode|decode")->required();
  cf->add_option("-i,--input", cf_in, "input")->required();
  cf->add_option("--window", cf_cfg.window, "training half-width");
  cf->add_option("--guard", cf_cfg.guard, "guard half-width");
  cf->add_option("--thd", cf_cfg.threshold, "linear SNR threshold");
  cf->add_option("-o,--output", cf_out, "output")->required();
  cf->callback([&]() {
    if (cf_mode == "encode") {
      const CfarFrame f = cfar_encode(read_rdt(cf_in), cf_cfg);
      write_acf(f, cf_out);
      std::printf("wrote %s  flagged=%zu  value_bpp=%.4f\n", cf_out.c_str(),
                  f.flagged(), f.value_bpp());
    } else if (cf_mode == "decode") {
      write_rdt(cfar_decode(read_acf(cf_in)), cf_out);
      std::cout << "wrote " << cf_out << "\n";
    } else {
      throw InvalidArgument("mode must be encode or decode");
    }
  });

  // ---- sweep ----------------------------------------------------------------
  auto* sw = app.add_subcommand("sweep", "batch rate/bit-width/block sweeps");
  std::string sw_config, sw_out_dir;
  bool sw_lambda = false;
  sw->add_option("-c,--config", sw_config, "sweep spec JSON")->required();
  sw->add_option("-o,--output", sw_out_dir, "output directory")->required();
  sw->add_flag("--lambda", sw_lambda, "run the controller lambda sweep instead");
  sw->callback([&]() {
    SweepSpec spec = read_sweep_spec(sw_config);
    spec.output_dir = sw_out_dir;
    std::filesystem::create_directories(sw_out_dir);
    if (sw_lambda) {
      const auto rows = lambda_sweep(spec);
      const auto path = std::filesystem::path(sw_out_dir) / "lambda.csv";
      write_lambda_csv(rows, path);
      std::cout << "wrote " << path.string() << "\n";
    } else {
      const SweepTable table = sweep(spec);
      const auto path = std::filesystem::path(sw_out_dir) / "table.csv";
      write_csv(table, path);
      std::cout << "wrote " << path.string() << "\n";
    }
  });

  // ---- plot -----------------------------------------------------------------
  auto* plot = app.add_subcommand("plot", "render a CSV table to SVG");
  std::string plot_in, plot_kind = "rate_snr", plot_out;
  plot->add_option("-i,--input", plot_in, "input CSV")->required();
  plot->add_option("--kind", plot_kind, "rate_snr|rate_accuracy|trace");
  plot->add_option("-o,--output", plot_out, "output SVG")->required();
  plot->callback([&]() {
    emit_plot(read_csv(plot_in), parse_plot_kind(plot_kind), plot_out, plot_in);
    std::cout << "wrote " << plot_out << "\n";
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const adaradar::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
