#ifndef ADARADAR_SWEEP_HPP
#define ADARADAR_SWEEP_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adaradar/oracle.hpp"
#include "adaradar/rate_control.hpp"
#include "adaradar/tensor.hpp"

namespace adaradar {

enum class CodecVariant { spectral, index_value, cfar };

struct SweepGrid {
  std::vector<double> ratios;        // r, spectral + index_value
  std::vector<int> bit_widths;       // s, spectral only
  std::vector<int> block_sides;      // M
  std::vector<double> lambdas;       // controller sweeps
  std::vector<double> cfar_thresholds;
};

// Batch experiment description; parsed from JSON (see parse_sweep_spec).
struct SweepSpec {
  std::string input_path;  // .rdt or .rdtseq; empty -> use the generator
  SceneSpec generator;
  SequenceSpec sequence;   // lambda_sweep frame source
  SweepGrid grid;
  CodecVariant variant = CodecVariant::spectral;
  std::vector<std::uint64_t> seeds = {1};
  std::string output_dir;  // empty disables the cell cache
  int workers = 1;
  int match_radius = 3;
  OracleConfig oracle;
  ControlParams control;
};

SweepSpec parse_sweep_spec(const std::string& json_text);
SweepSpec read_sweep_spec(const std::filesystem::path& path);

struct SweepRow {
  std::string variant;
  int block_side = 0;
  int bit_width = 0;       // 0 when not applicable
  double ratio = 0.0;      // 0 when not applicable
  int keep_count = 0;      // index_value budget
  double cfar_threshold = 0.0;
  std::uint64_t seed = 0;
  double value_bpp = 0.0;
  double wire_bpp = 0.0;
  double snr_db = 0.0;
  double rae_mean = 0.0;
  double rae_max = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::string error;  // nonempty when the cell failed
};

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<SweepRow> rows;
};

// Cross-product evaluation over the grid; cells run concurrently up to
// spec.workers, failures are recorded per cell and the run continues. With an
// output_dir, finished cells are cached by a hash of (input digest, params)
// and reruns recompute only the missing ones.
SweepTable sweep(const SweepSpec& spec);

void write_csv(const SweepTable& table, const std::filesystem::path& path);

struct LambdaRow {
  double lambda = 0.0;
  double mean_ratio = 0.0;
  double mean_value_bpp = 0.0;
  double mean_f1 = 0.0;
  double mean_confidence = 0.0;
};

// Runs the adaptive controller once per lambda over the generated sequence
// and reports per-run means.
std::vector<LambdaRow> lambda_sweep(const SweepSpec& spec);

void write_lambda_csv(std::span<const LambdaRow> rows,
                      const std::filesystem::path& path);

}  // namespace adaradar

#endif  // ADARADAR_SWEEP_HPP
