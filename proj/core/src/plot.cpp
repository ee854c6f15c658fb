#include "adaradar/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "adaradar/errors.hpp"

namespace adaradar {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#17becf", "#8c564b", "#7f7f7f"};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Series {
  std::string label;
  std::vector<Point> points;
};

double parse_cell(const std::string& cell) {
  if (cell.empty()) return std::nan("");
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str()) return std::nan("");
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// Linear axis ticks at a 1/2/5 step covering [lo, hi].
std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    ticks.push_back(t);
  }
  return ticks;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log_scale = false;
  double px0 = 0.0, px1 = 1.0;  // pixel range

  double to_px(double v) const {
    double t;
    if (log_scale) {
      t = (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
    } else {
      t = (v - lo) / (hi - lo);
    }
    return px0 + t * (px1 - px0);
  }

  std::vector<double> ticks() const {
    if (!log_scale) return linear_ticks(lo, hi);
    std::vector<double> out;
    const int d0 = static_cast<int>(std::floor(std::log10(lo)));
    const int d1 = static_cast<int>(std::ceil(std::log10(hi)));
    for (int d = d0; d <= d1; ++d) {
      const double v = std::pow(10.0, d);
      if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) out.push_back(v);
    }
    if (out.empty()) out = {lo, hi};
    return out;
  }
};

void expand(double v, double& lo, double& hi) {
  lo = std::min(lo, v);
  hi = std::max(hi, v);
}

// One framed panel with axes, ticks, series polylines and markers.
void draw_panel(std::ostream& svg, std::vector<Series> series, Axis x, Axis y,
                double top, double bottom, const std::string& x_label,
                const std::string& y_label) {
  const double left = 70.0, right = 820.0;
  x.px0 = left;
  x.px1 = right;
  y.px0 = bottom;  // y axis grows upward
  y.px1 = top;

  svg << "<rect x='" << left << "' y='" << top << "' width='" << right - left
      << "' height='" << bottom - top << "' fill='none' stroke='#333'/>\n";

  for (double t : x.ticks()) {
    const double px = x.to_px(t);
    svg << "<line x1='" << px << "' y1='" << bottom << "' x2='" << px << "' y2='"
        << bottom + 5 << "' stroke='#333'/>\n";
    svg << "<text x='" << px << "' y='" << bottom + 18
        << "' font-size='11' text-anchor='middle'>" << fmt(t) << "</text>\n";
  }
  for (double t : y.ticks()) {
    const double py = y.to_px(t);
    svg << "<line x1='" << left - 5 << "' y1='" << py << "' x2='" << left << "' y2='"
        << py << "' stroke='#333'/>\n";
    svg << "<text x='" << left - 8 << "' y='" << py + 4
        << "' font-size='11' text-anchor='end'>" << fmt(t) << "</text>\n";
  }
  svg << "<text x='" << (left + right) / 2 << "' y='" << bottom + 34
      << "' font-size='12' text-anchor='middle'>" << x_label << "</text>\n";
  svg << "<text x='18' y='" << (top + bottom) / 2
      << "' font-size='12' text-anchor='middle' transform='rotate(-90 18 "
      << (top + bottom) / 2 << ")'>" << y_label << "</text>\n";

  int color = 0;
  for (Series& s : series) {
    std::sort(s.points.begin(), s.points.end(),
              [](const Point& a, const Point& b) { return a.x < b.x; });
    const char* stroke = kPalette[color % 8];
    svg << "<polyline fill='none' stroke='" << stroke << "' stroke-width='1.5' points='";
    for (const Point& p : s.points) {
      svg << x.to_px(p.x) << ',' << y.to_px(p.y) << ' ';
    }
    svg << "'/>\n";
    for (const Point& p : s.points) {
      svg << "<circle cx='" << x.to_px(p.x) << "' cy='" << y.to_px(p.y)
          << "' r='2.5' fill='" << stroke << "'/>\n";
    }
    svg << "<text x='" << right - 8 << "' y='" << top + 16 + 14 * color
        << "' font-size='11' text-anchor='end' fill='" << stroke << "'>" << s.label
        << "</text>\n";
    ++color;
  }
}

std::vector<Series> gather_xy_series(const CsvTable& table, const std::string& x_col,
                                     const std::string& y_col,
                                     bool require_positive_x) {
  const int xi = table.column(x_col);
  const int yi = table.column(y_col);
  if (xi < 0 || yi < 0) {
    throw InvalidArgument("table lacks columns " + x_col + "/" + y_col);
  }
  const int err = table.column("error");
  const int variant = table.column("variant");
  const int m_col = table.column("M");
  const int s_col = table.column("s");

  std::map<std::string, Series> by_label;
  for (const auto& row : table.rows) {
    if (err >= 0 && !row[err].empty()) continue;
    const double x = parse_cell(row[xi]);
    const double y = parse_cell(row[yi]);
    if (std::isnan(x) || std::isnan(y)) continue;
    if (require_positive_x && !(x > 0.0)) continue;
    std::string label;
    if (variant >= 0) label = row[variant];
    if (m_col >= 0 && !row[m_col].empty() && row[m_col] != "0") {
      label += " M" + row[m_col];
    }
    if (s_col >= 0 && !row[s_col].empty() && row[s_col] != "0") {
      label += " s" + row[s_col];
    }
    if (label.empty()) label = y_col;
    Series& series = by_label[label];
    series.label = label;
    series.points.push_back({x, y});
  }

  std::vector<Series> out;
  for (auto& [label, s] : by_label) out.push_back(std::move(s));
  if (out.empty()) throw InvalidArgument("no plottable rows");
  return out;
}

void bounds_of(const std::vector<Series>& series, Axis& x, Axis& y) {
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (const Series& s : series) {
    for (const Point& p : s.points) {
      expand(p.x, xlo, xhi);
      expand(p.y, ylo, yhi);
    }
  }
  if (ylo == yhi) {
    ylo -= 1.0;
    yhi += 1.0;
  }
  if (xlo == xhi) {
    xlo *= 0.5;
    xhi *= 2.0;
  }
  const double pad = 0.05 * (yhi - ylo);
  x.lo = xlo;
  x.hi = xhi;
  y.lo = ylo - pad;
  y.hi = yhi + pad;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
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
    if (first) {
      table.columns = std::move(fields);
      first = false;
    } else {
      fields.resize(table.columns.size());
      table.rows.push_back(std::move(fields));
    }
  }
  if (table.columns.empty()) throw FormatError("CSV has no header");
  return table;
}

PlotKind parse_plot_kind(const std::string& name) {
  if (name == "rate_snr") return PlotKind::rate_snr;
  if (name == "rate_accuracy") return PlotKind::rate_accuracy;
  if (name == "trace") return PlotKind::trace;
  throw InvalidArgument("unknown plot kind: " + name);
}

void emit_plot(const CsvTable& table, PlotKind kind,
               const std::filesystem::path& svg_path,
               const std::string& source_reference) {
  if (table.rows.empty()) throw InvalidArgument("cannot plot an empty table");

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='860' height='540' "
         "viewBox='0 0 860 540'>\n";
  svg << "<desc>source: " << source_reference << "</desc>\n";
  svg << "<rect width='860' height='540' fill='white'/>\n";

  if (kind == PlotKind::rate_snr || kind == PlotKind::rate_accuracy) {
    const std::string y_col = (kind == PlotKind::rate_snr) ? "snr_db" : "f1";
    auto series = gather_xy_series(table, "value_bpp", y_col, true);
    Axis x, y;
    bounds_of(series, x, y);
    x.log_scale = true;
    draw_panel(svg, std::move(series), x, y, 30.0, 480.0, "bit rate [bpp]",
               (kind == PlotKind::rate_snr) ? "SNR [dB]" : "F1");
  } else {
    auto ratio_series = gather_xy_series(table, "t", "r", false);
    auto p_series = gather_xy_series(table, "t", "p", false);
    Axis x1, y1, x2, y2;
    bounds_of(ratio_series, x1, y1);
    bounds_of(p_series, x2, y2);
    x1.lo = x2.lo = std::min(x1.lo, x2.lo);
    x1.hi = x2.hi = std::max(x1.hi, x2.hi);
    draw_panel(svg, std::move(ratio_series), x1, y1, 30.0, 240.0, "",
               "pruning ratio");
    draw_panel(svg, std::move(p_series), x2, y2, 290.0, 480.0, "frame",
               "confidence");
  }

  svg << "</svg>\n";

  std::ofstream out(svg_path);
  if (!out) throw Error("cannot open " + svg_path.string() + " for writing");
  out << svg.str();
  if (!out) throw Error("SVG write failed");
}

}  // namespace adaradar
