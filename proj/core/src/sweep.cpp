#include "adaradar/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "adaradar/baselines.hpp"
#include "adaradar/codec.hpp"
#include "adaradar/errors.hpp"
#include "adaradar/metrics.hpp"

namespace adaradar {

namespace {

const std::vector<std::string> kColumns = {
    "variant",   "M",       "s",        "r",      "K",
    "thd",       "seed",    "value_bpp", "wire_bpp", "snr_db",
    "rae_mean",  "rae_max", "precision", "recall", "f1",
    "error"};

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string row_to_line(const SweepRow& row) {
  std::ostringstream out;
  out << row.variant << ',' << row.block_side << ',' << row.bit_width << ','
      << format_double(row.ratio == 0.0 ? std::nan("") : row.ratio) << ','
      << (row.keep_count > 0 ? std::to_string(row.keep_count) : "") << ','
      << format_double(row.cfar_threshold == 0.0 ? std::nan("") : row.cfar_threshold)
      << ',' << row.seed << ',' << format_double(row.value_bpp) << ','
      << format_double(row.wire_bpp) << ',' << format_double(row.snr_db) << ','
      << format_double(row.rae_mean) << ',' << format_double(row.rae_max) << ','
      << format_double(row.precision) << ',' << format_double(row.recall) << ','
      << format_double(row.f1) << ',' << row.error;
  return out.str();
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

double parse_double_field(const std::string& field) {
  if (field.empty()) return std::nan("");
  return std::strtod(field.c_str(), nullptr);
}

bool row_from_line(const std::string& line, SweepRow& row) {
  const std::vector<std::string> fields = split_line(line);
  if (fields.size() != kColumns.size()) return false;
  row.variant = fields[0];
  row.block_side = static_cast<int>(parse_double_field(fields[1]));
  row.bit_width = static_cast<int>(parse_double_field(fields[2]));
  const double ratio = parse_double_field(fields[3]);
  row.ratio = std::isnan(ratio) ? 0.0 : ratio;
  row.keep_count = fields[4].empty() ? 0 : static_cast<int>(parse_double_field(fields[4]));
  const double thd = parse_double_field(fields[5]);
  row.cfar_threshold = std::isnan(thd) ? 0.0 : thd;
  row.seed = static_cast<std::uint64_t>(parse_double_field(fields[6]));
  row.value_bpp = parse_double_field(fields[7]);
  row.wire_bpp = parse_double_field(fields[8]);
  row.snr_db = parse_double_field(fields[9]);
  row.rae_mean = parse_double_field(fields[10]);
  row.rae_max = parse_double_field(fields[11]);
  row.precision = parse_double_field(fields[12]);
  row.recall = parse_double_field(fields[13]);
  row.f1 = parse_double_field(fields[14]);
  row.error = fields[15];
  return true;
}

// FNV-1a over the canonical cell descriptor.
std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string sanitize_error(std::string message) {
  for (char& c : message) {
    if (c == ',' || c == '\n') c = ';';
  }
  return message;
}

struct Cell {
  CodecVariant variant;
  int block_side = 0;
  int bit_width = 0;
  double ratio = 0.0;
  int keep_count = 0;
  double cfar_threshold = 0.0;
  std::uint64_t seed = 0;

  std::string key(const std::string& input_digest) const {
    std::ostringstream out;
    out << input_digest << '|' << static_cast<int>(variant) << '|' << block_side
        << '|' << bit_width << '|' << format_double(ratio) << '|' << keep_count
        << '|' << format_double(cfar_threshold) << '|' << seed;
    return out.str();
  }
};

CodecVariant parse_variant(const std::string& name) {
  if (name == "spectral") return CodecVariant::spectral;
  if (name == "index_value") return CodecVariant::index_value;
  if (name == "cfar") return CodecVariant::cfar;
  throw InvalidArgument("unknown codec variant: " + name);
}

std::string variant_name(CodecVariant v) {
  switch (v) {
    case CodecVariant::spectral: return "spectral";
    case CodecVariant::index_value: return "index_value";
    case CodecVariant::cfar: return "cfar";
  }
  return "?";
}

SceneSpec parse_scene(const nlohmann::json& j) {
  SceneSpec scene;
  scene.channels = j.value("channels", scene.channels);
  scene.height = j.value("height", scene.height);
  scene.width = j.value("width", scene.width);
  scene.noise_sigma = j.value("noise_sigma", scene.noise_sigma);
  scene.seed = j.value("seed", scene.seed);
  if (j.contains("targets")) {
    for (const auto& t : j["targets"]) {
      Target target;
      target.range_bin = t.value("range", 0);
      target.doppler_bin = t.value("doppler", 0);
      target.amplitude = t.value("amplitude", 1.0);
      target.channel_phase_slope = t.value("phase_slope", 0.0);
      scene.targets.push_back(target);
    }
  }
  return scene;
}

OracleConfig parse_oracle(const nlohmann::json& j) {
  OracleConfig cfg;
  cfg.detection_threshold = j.value("detection_threshold", cfg.detection_threshold);
  cfg.nms_radius = j.value("nms_radius", cfg.nms_radius);
  cfg.calib_midpoint_db = j.value("midpoint_db", cfg.calib_midpoint_db);
  cfg.calib_slope_db = j.value("slope_db", cfg.calib_slope_db);
  if (j.value("floor", "median") == "mean") {
    cfg.noise_floor = NoiseFloorEstimator::mean;
  }
  return cfg;
}

// Deterministic digest of the evaluation input.
std::string input_digest(const SweepSpec& spec) {
  if (!spec.input_path.empty()) {
    std::ifstream in(spec.input_path, std::ios::binary);
    if (!in) throw Error("cannot open " + spec.input_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return "file:" + std::to_string(fnv1a(buf.str()));
  }
  std::ostringstream out;
  out << "gen:" << spec.generator.channels << 'x' << spec.generator.height << 'x'
      << spec.generator.width << ":n" << format_double(spec.generator.noise_sigma);
  for (const Target& t : spec.generator.targets) {
    out << ":t" << t.range_bin << ',' << t.doppler_bin << ','
        << format_double(t.amplitude) << ',' << format_double(t.channel_phase_slope);
  }
  return std::to_string(fnv1a(out.str()));
}

SweepRow evaluate_cell(const SweepSpec& spec, const Cell& cell) {
  SweepRow row;
  row.variant = variant_name(cell.variant);
  row.block_side = cell.block_side;
  row.bit_width = cell.bit_width;
  row.ratio = cell.ratio;
  row.keep_count = cell.keep_count;
  row.cfar_threshold = cell.cfar_threshold;
  row.seed = cell.seed;

  RadarTensor x;
  std::vector<Target> truth;
  bool have_truth = false;
  if (!spec.input_path.empty()) {
    if (spec.input_path.ends_with(".rdtseq")) {
      x = read_rdt_sequence(spec.input_path).front();
    } else {
      x = read_rdt(spec.input_path);
    }
  } else {
    SceneSpec scene = spec.generator;
    scene.seed = cell.seed;
    Scene s = generate_scene(scene);
    x = std::move(s.tensor);
    truth = std::move(s.truth);
    have_truth = true;
  }

  RadarTensor decoded;
  switch (cell.variant) {
    case CodecVariant::spectral: {
      const EncodedFrame frame =
          encode_frame(x, cell.ratio, cell.bit_width, cell.block_side);
      const BitRate rate = bit_rate(frame);
      row.value_bpp = rate.value_bpp;
      row.wire_bpp = rate.wire_bpp;
      decoded = decode_frame(frame);
      break;
    }
    case CodecVariant::index_value: {
      const IndexValueFrame frame = iv_encode(x, cell.block_side, cell.keep_count);
      row.value_bpp = frame.value_bpp();
      row.wire_bpp = std::nan("");
      decoded = iv_decode(frame);
      break;
    }
    case CodecVariant::cfar: {
      CfarConfig cfg;
      cfg.threshold = cell.cfar_threshold;
      const CfarFrame frame = cfar_encode(x, cfg);
      row.value_bpp = frame.value_bpp();
      row.wire_bpp = std::nan("");
      decoded = cfar_decode(frame);
      break;
    }
  }

  row.snr_db = snr_db(x, decoded);
  const Rae r = rae(x, decoded);
  row.rae_mean = r.mean;
  row.rae_max = r.max;

  if (have_truth) {
    const auto proposals = detect(decoded, spec.oracle);
    const Score s = score(proposals, truth, spec.match_radius);
    row.precision = s.precision;
    row.recall = s.recall;
    row.f1 = s.f1;
  } else {
    row.precision = row.recall = row.f1 = std::nan("");
  }
  return row;
}

std::vector<Cell> enumerate_cells(const SweepSpec& spec) {
  SweepGrid grid = spec.grid;
  std::sort(grid.ratios.begin(), grid.ratios.end());
  std::sort(grid.bit_widths.begin(), grid.bit_widths.end());
  std::sort(grid.block_sides.begin(), grid.block_sides.end());
  std::sort(grid.cfar_thresholds.begin(), grid.cfar_thresholds.end());

  std::vector<Cell> cells;
  if (spec.variant == CodecVariant::cfar) {
    for (double thd : grid.cfar_thresholds) {
      for (std::uint64_t seed : spec.seeds) {
        Cell cell;
        cell.variant = spec.variant;
        cell.cfar_threshold = thd;
        cell.seed = seed;
        cells.push_back(cell);
      }
    }
    return cells;
  }

  for (int m : grid.block_sides) {
    const int block_len = m * m;
    if (spec.variant == CodecVariant::spectral) {
      for (int s : grid.bit_widths) {
        for (double r : grid.ratios) {
          for (std::uint64_t seed : spec.seeds) {
            Cell cell;
            cell.variant = spec.variant;
            cell.block_side = m;
            cell.bit_width = s;
            cell.ratio = r;
            cell.seed = seed;
            cells.push_back(cell);
          }
        }
      }
    } else {
      for (double r : grid.ratios) {
        const int keep = std::clamp(static_cast<int>(block_len / r), 1, block_len);
        for (std::uint64_t seed : spec.seeds) {
          Cell cell;
          cell.variant = spec.variant;
          cell.block_side = m;
          cell.ratio = r;
          cell.keep_count = keep;
          cell.seed = seed;
          cells.push_back(cell);
        }
      }
    }
  }
  return cells;
}

}  // namespace

SweepSpec parse_sweep_spec(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded()) throw FormatError("sweep spec is not valid JSON");

  SweepSpec spec;
  spec.input_path = j.value("input", "");
  if (j.contains("generator")) spec.generator = parse_scene(j["generator"]);
  if (spec.input_path.empty() && !j.contains("generator")) {
    throw InvalidArgument("sweep spec needs either input or generator");
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    if (g.contains("r")) spec.grid.ratios = g["r"].get<std::vector<double>>();
    if (g.contains("s")) spec.grid.bit_widths = g["s"].get<std::vector<int>>();
    if (g.contains("M")) spec.grid.block_sides = g["M"].get<std::vector<int>>();
    if (g.contains("lambda")) spec.grid.lambdas = g["lambda"].get<std::vector<double>>();
    if (g.contains("thd")) {
      spec.grid.cfar_thresholds = g["thd"].get<std::vector<double>>();
    }
  }
  spec.variant = parse_variant(j.value("variant", "spectral"));
  if (j.contains("seeds")) spec.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  spec.output_dir = j.value("output_dir", "");
  spec.workers = j.value("workers", 1);
  spec.match_radius = j.value("match_radius", 3);
  if (j.contains("oracle")) spec.oracle = parse_oracle(j["oracle"]);

  spec.sequence.scene = spec.generator;
  spec.sequence.frames = j.value("frames", 200);
  if (j.contains("control")) {
    const auto& c = j["control"];
    spec.control.r_init = c.value("r_init", spec.control.r_init);
    spec.control.r_min = c.value("r_min", spec.control.r_min);
    spec.control.r_max = c.value("r_max", spec.control.r_max);
    spec.control.eta = c.value("eta", spec.control.eta);
    spec.control.epsilon = c.value("eps", spec.control.epsilon);
    spec.control.p_threshold = c.value("p_threshold", spec.control.p_threshold);
    spec.control.p_min = c.value("p_min", spec.control.p_min);
    spec.control.grad_clip = c.value("clip", spec.control.grad_clip);
    spec.control.bit_width = c.value("s", spec.control.bit_width);
    spec.control.block_side = c.value("M", spec.control.block_side);
    if (c.value("objective", "penalized") == "eqS5") {
      spec.control.objective = ObjectiveKind::constraint_aware;
    }
  }
  return spec;
}

SweepSpec read_sweep_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sweep_spec(buf.str());
}

SweepTable sweep(const SweepSpec& spec) {
  const std::vector<Cell> cells = enumerate_cells(spec);
  if (cells.empty()) throw InvalidArgument("sweep grid is empty");

  const std::string digest = input_digest(spec);
  std::filesystem::path cache_dir;
  if (!spec.output_dir.empty()) {
    cache_dir = std::filesystem::path(spec.output_dir) / "cache";
    std::filesystem::create_directories(cache_dir);
  }

  SweepTable table;
  table.columns = kColumns;
  table.rows.resize(cells.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      const std::uint64_t key = fnv1a(cell.key(digest));

      std::filesystem::path cache_file;
      if (!cache_dir.empty()) {
        char name[32];
        std::snprintf(name, sizeof(name), "%016llx.row",
                      static_cast<unsigned long long>(key));
        cache_file = cache_dir / name;
        std::ifstream cached(cache_file);
        if (cached) {
          std::string line;
          std::getline(cached, line);
          SweepRow row;
          if (row_from_line(line, row)) {
            table.rows[i] = std::move(row);
            continue;
          }
        }
      }

      SweepRow row;
      try {
        row = evaluate_cell(spec, cell);
      } catch (const std::exception& e) {
        row.variant = variant_name(cell.variant);
        row.block_side = cell.block_side;
        row.bit_width = cell.bit_width;
        row.ratio = cell.ratio;
        row.keep_count = cell.keep_count;
        row.cfar_threshold = cell.cfar_threshold;
        row.seed = cell.seed;
        row.value_bpp = row.wire_bpp = row.snr_db = std::nan("");
        row.rae_mean = row.rae_max = std::nan("");
        row.precision = row.recall = row.f1 = std::nan("");
        row.error = sanitize_error(e.what());
      }
      if (!cache_file.empty()) {
        std::ofstream out(cache_file);
        out << row_to_line(row) << '\n';
      }
      table.rows[i] = std::move(row);
    }
  };

  const int workers = std::max(1, spec.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return table;
}

void write_csv(const SweepTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << table.columns[i] << (i + 1 < table.columns.size() ? ',' : '\n');
  }
  for (const SweepRow& row : table.rows) {
    out << row_to_line(row) << '\n';
  }
  if (!out) throw Error("CSV write failed");
}

std::vector<LambdaRow> lambda_sweep(const SweepSpec& spec) {
  if (spec.grid.lambdas.empty()) throw InvalidArgument("lambda grid is empty");
  if (!spec.input_path.empty()) {
    throw InvalidArgument("lambda_sweep runs on generated sequences");
  }

  SequenceSpec seq = spec.sequence;
  if (!spec.seeds.empty()) seq.scene.seed = spec.seeds.front();
  const std::vector<Scene> scenes = generate_sequence(seq);
  std::vector<RadarTensor> frames;
  frames.reserve(scenes.size());
  for (const Scene& s : scenes) frames.push_back(s.tensor);

  const TaskOracleFn oracle = make_detection_oracle(spec.oracle);

  std::vector<double> lambdas = spec.grid.lambdas;
  std::sort(lambdas.begin(), lambdas.end());

  std::vector<LambdaRow> rows;
  rows.reserve(lambdas.size());
  for (double lambda : lambdas) {
    ControlParams params = spec.control;
    params.lambda = lambda;
    const AdaptTrace trace = run_adaptive(frames, oracle, params);

    LambdaRow row;
    row.lambda = lambda;
    row.mean_ratio = trace.mean_ratio();
    row.mean_value_bpp = trace.mean_value_bpp();
    double f1_acc = 0.0;
    double p_acc = 0.0;
    for (std::size_t t = 0; t < frames.size(); ++t) {
      const AdaptRecord& rec = trace.records[t];
      const EncodedFrame frame = encode_frame(frames[t], rec.ratio, params.bit_width,
                                              params.block_side, t);
      const auto proposals = detect(decode_frame(frame), spec.oracle);
      f1_acc += score(proposals, scenes[t].truth, spec.match_radius).f1;
      p_acc += rec.p;
    }
    row.mean_f1 = f1_acc / static_cast<double>(frames.size());
    row.mean_confidence = p_acc / static_cast<double>(frames.size());
    rows.push_back(row);
  }
  return rows;
}

void write_lambda_csv(std::span<const LambdaRow> rows,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "lambda,mean_r,mean_value_bpp,mean_f1,mean_p\n";
  for (const LambdaRow& row : rows) {
    out << format_double(row.lambda) << ',' << format_double(row.mean_ratio) << ','
        << format_double(row.mean_value_bpp) << ',' << format_double(row.mean_f1)
        << ',' << format_double(row.mean_confidence) << '\n';
  }
  if (!out) throw Error("CSV write failed");
}

}  // namespace adaradar
