#pragma once

#include "chronofit/core.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace chronofit {

enum class PlotKind { time, seasonal, decomposition, correlogram, forecast_fan, scatter, scatter_matrix, residual_panel };

enum class LayerStyle { line, points, stems, bars, area };

/// Colour slot; the theme maps roles to colours.
enum class StyleRole { primary, secondary, fitted, forecast, interval, reference, accent };

struct Layer {
  std::string name;
  /// Empty means 0, 1, 2, ...
  Vector x;
  Vector y;
  /// Lower edge for `area` layers (y is the upper edge).
  Vector y_lower;
  LayerStyle style = LayerStyle::line;
  StyleRole role = StyleRole::primary;
  int panel = 0;
};

struct PlotSpec {
  PlotKind kind = PlotKind::time;
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 900;
  int height = 480;
  std::vector<Layer> layers;
  std::vector<std::string> panel_titles;
  /// Panels per row.
  int columns = 1;
  /// Correlogram significance band, shaded over [-band, band].
  std::optional<double> band;
  /// Panels that show the band; empty means all.
  std::vector<int> band_panels;
  /// Category labels for integer x positions 0, 1, ... (seasonal plots).
  std::vector<std::string> x_tick_labels;
};

/// Throws DataError on an empty layer list, non-positive size, or
/// mismatched layer lengths.
void validate(const PlotSpec& spec);

/// Standalone SVG document. Identical specs give identical bytes under the
/// same CHRONOFIT_PLOT_THEME.
[[nodiscard]] std::string render_svg(const PlotSpec& spec);
void render_svg(const PlotSpec& spec, const std::filesystem::path& path);

}  // namespace chronofit
