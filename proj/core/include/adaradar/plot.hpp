#ifndef ADARADAR_PLOT_HPP
#define ADARADAR_PLOT_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace adaradar {

// Generic CSV table for plotting: a header row plus string cells.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::filesystem::path& path);

enum class PlotKind {
  rate_snr,       // SNR vs value_bpp, log-x, one series per (variant, M, s)
  rate_accuracy,  // F1 vs value_bpp, log-x
  trace           // r_t and p_t over frame index, two panels
};

PlotKind parse_plot_kind(const std::string& name);

// Renders a self-contained SVG: axes, tick labels, legend, and a <desc>
// element referencing the source CSV. Throws InvalidArgument when the table
// has no plottable rows.
void emit_plot(const CsvTable& table, PlotKind kind,
               const std::filesystem::path& svg_path,
               const std::string& source_reference);

}  // namespace adaradar

#endif  // ADARADAR_PLOT_HPP
